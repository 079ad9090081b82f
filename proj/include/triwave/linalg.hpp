#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

// Direct dense complex solver for the small (8x8) steady-state systems.
// Partial pivoting plus one step of iterative refinement; robustness over
// speed at this size.

namespace triwave::linalg {

using cplx = std::complex<double>;

template <std::size_t N>
struct Lu {
  std::array<cplx, N * N> lu{};
  std::array<int, N> piv{};
  bool singular = false;
  double min_pivot = 0.0;
  double max_pivot = 0.0;

  // Rough lower bound on the 1-norm condition number from the pivot spread.
  double pivot_ratio() const {
    return min_pivot > 0.0 ? max_pivot / min_pivot
                           : std::numeric_limits<double>::infinity();
  }
};

template <std::size_t N>
Lu<N> lu_factor(const std::array<cplx, N * N>& a) {
  Lu<N> f;
  f.lu = a;
  auto& m = f.lu;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t p = col;
    double best = std::abs(m[col * N + col]);
    for (std::size_t r = col + 1; r < N; ++r) {
      const double v = std::abs(m[r * N + col]);
      if (v > best) {
        best = v;
        p = r;
      }
    }
    f.piv[col] = static_cast<int>(p);
    if (best == 0.0) {
      f.singular = true;
      f.min_pivot = 0.0;
      return f;
    }
    if (p != col)
      for (std::size_t k = 0; k < N; ++k) std::swap(m[p * N + k], m[col * N + k]);
    const cplx inv_d = 1.0 / m[col * N + col];
    for (std::size_t r = col + 1; r < N; ++r) {
      const cplx l = m[r * N + col] * inv_d;
      m[r * N + col] = l;
      if (l != 0.0)
        for (std::size_t k = col + 1; k < N; ++k) m[r * N + k] -= l * m[col * N + k];
    }
    const double d = std::abs(m[col * N + col]);
    if (col == 0) {
      f.min_pivot = f.max_pivot = d;
    } else {
      f.min_pivot = std::min(f.min_pivot, d);
      f.max_pivot = std::max(f.max_pivot, d);
    }
  }
  return f;
}

template <std::size_t N>
void lu_solve_in_place(const Lu<N>& f, std::array<cplx, N>& b) {
  for (std::size_t i = 0; i < N; ++i) {
    const auto p = static_cast<std::size_t>(f.piv[i]);
    if (p != i) std::swap(b[p], b[i]);
    for (std::size_t j = 0; j < i; ++j) b[i] -= f.lu[i * N + j] * b[j];
  }
  for (std::size_t i = N; i-- > 0;) {
    for (std::size_t j = i + 1; j < N; ++j) b[i] -= f.lu[i * N + j] * b[j];
    b[i] /= f.lu[i * N + i];
  }
}

template <std::size_t N>
std::array<cplx, N> lu_solve(const Lu<N>& f, std::array<cplx, N> b) {
  lu_solve_in_place(f, b);
  return b;
}

// One step of iterative refinement against the original matrix.
template <std::size_t N>
std::array<cplx, N> solve_refined(const std::array<cplx, N * N>& a, const Lu<N>& f,
                                  const std::array<cplx, N>& b) {
  std::array<cplx, N> x = lu_solve<N>(f, b);
  std::array<cplx, N> r{};
  for (std::size_t i = 0; i < N; ++i) {
    cplx acc = b[i];
    for (std::size_t j = 0; j < N; ++j) acc -= a[i * N + j] * x[j];
    r[i] = acc;
  }
  lu_solve_in_place(f, r);
  for (std::size_t i = 0; i < N; ++i) x[i] += r[i];
  return x;
}

template <std::size_t N>
double norm1(const std::array<cplx, N * N>& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::abs(a[i * N + j]);
    best = std::max(best, s);
  }
  return best;
}

// Exact ||A^-1||_1 via N column solves; fine at this size.
template <std::size_t N>
double inverse_norm1(const Lu<N>& f) {
  double best = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    std::array<cplx, N> e{};
    e[j] = 1.0;
    lu_solve_in_place(f, e);
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::abs(e[i]);
    best = std::max(best, s);
  }
  return best;
}

template <std::size_t N>
double condition_1(const std::array<cplx, N * N>& a, const Lu<N>& f) {
  if (f.singular) return std::numeric_limits<double>::infinity();
  return norm1<N>(a) * inverse_norm1<N>(f);
}

}  // namespace triwave::linalg
