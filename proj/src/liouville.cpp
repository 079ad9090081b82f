#include "triwave/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "triwave/errors.hpp"
#include "triwave/linalg.hpp"

namespace triwave {

namespace {
constexpr cplx I{0.0, 1.0};

void check_field_dephasing(const RelaxationSpec& r, cplx e1, cplx e2, cplx e_ir) {
  if (r.gamma21 == 0.0 && e1 != 0.0)
    throw ValidationError("PacketParams: gamma21 = 0 with a drive on 2<->1");
  if (r.gamma31 == 0.0 && e2 != 0.0)
    throw ValidationError("PacketParams: gamma31 = 0 with a drive on 3<->1");
  if (r.gamma32 == 0.0 && e_ir != 0.0)
    throw ValidationError("PacketParams: gamma32 = 0 with a field on 3<->2");
}
}  // namespace

PacketParams::PacketParams(const Detunings& det, const RelaxationSpec& relax,
                           cplx e1, cplx e2, cplx e_ir)
    : det_(det), relax_(relax), e1_(e1), e2_(e2), e_ir_(e_ir) {
  check_field_dephasing(relax, e1, e2, e_ir);
  const double scale = 1.0 + std::abs(det.d21) + std::abs(det.d32);
  if (std::abs(det.d31 - (det.d21 + det.d32)) > 1e-9 * scale)
    throw ValidationError(
        "PacketParams: detunings break the loop identity d31 = d21 + d32");
}

PacketParams PacketParams::with_free_detunings(const Detunings& det,
                                               const RelaxationSpec& relax,
                                               cplx e1, cplx e2, cplx e_ir) {
  check_field_dephasing(relax, e1, e2, e_ir);
  PacketParams p;
  p.det_ = det;
  p.relax_ = relax;
  p.e1_ = e1;
  p.e2_ = e2;
  p.e_ir_ = e_ir;
  return p;
}

SteadySystem build_steady_system(const PacketParams& p) {
  const auto& d = p.detunings();
  const auto& r = p.relaxation();
  const cplx e1 = p.e1(), e2 = p.e2(), e = p.e_ir();
  const cplx g21{r.gamma21, d.d21};
  const cplx g31{r.gamma31, d.d31};
  const cplx g32{r.gamma32, d.d32};

  SteadySystem s;
  auto m = [&s](int row, int col) -> cplx& { return s.matrix[row * 8 + col]; };

  // rho22
  m(idx_rho22, idx_rho22) = -r.r21;
  m(idx_rho22, idx_rho33) = r.r32;
  m(idx_rho22, idx_s21) = -I * std::conj(e1);
  m(idx_rho22, idx_c21) = I * e1;
  m(idx_rho22, idx_s32) = I * std::conj(e);
  m(idx_rho22, idx_c32) = -I * e;

  // rho33 (rho11 eliminated by the trace)
  m(idx_rho33, idx_rho22) = -r.pump;
  m(idx_rho33, idx_rho33) = -(r.pump + r.r31 + r.r32);
  m(idx_rho33, idx_s31) = -I * std::conj(e2);
  m(idx_rho33, idx_c31) = I * e2;
  m(idx_rho33, idx_s32) = -I * std::conj(e);
  m(idx_rho33, idx_c32) = I * e;
  s.rhs[idx_rho33] = r.pump;

  // s21: -G21 s21 + i e1 (1 - 2 rho22 - rho33) + i e* s31 - i e2 s32*
  m(idx_s21, idx_rho22) = -2.0 * I * e1;
  m(idx_s21, idx_rho33) = -I * e1;
  m(idx_s21, idx_s21) = -g21;
  m(idx_s21, idx_s31) = I * std::conj(e);
  m(idx_s21, idx_c32) = -I * e2;
  s.rhs[idx_s21] = I * e1;

  // s31: -G31 s31 + i e2 (1 - rho22 - 2 rho33) + i e s21 - i e1 s32
  m(idx_s31, idx_rho22) = -I * e2;
  m(idx_s31, idx_rho33) = -2.0 * I * e2;
  m(idx_s31, idx_s21) = I * e;
  m(idx_s31, idx_s31) = -g31;
  m(idx_s31, idx_s32) = -I * e1;
  s.rhs[idx_s31] = I * e2;

  // s32: -G32 s32 + i e (rho22 - rho33) + i e2 s21* - i e1* s31
  m(idx_s32, idx_rho22) = I * e;
  m(idx_s32, idx_rho33) = -I * e;
  m(idx_s32, idx_s31) = -I * std::conj(e1);
  m(idx_s32, idx_s32) = -g32;
  m(idx_s32, idx_c21) = I * e2;

  // Conjugate coherence rows.
  m(idx_c21, idx_rho22) = 2.0 * I * std::conj(e1);
  m(idx_c21, idx_rho33) = I * std::conj(e1);
  m(idx_c21, idx_c21) = -std::conj(g21);
  m(idx_c21, idx_c31) = -I * e;
  m(idx_c21, idx_s32) = I * std::conj(e2);
  s.rhs[idx_c21] = -I * std::conj(e1);

  m(idx_c31, idx_rho22) = I * std::conj(e2);
  m(idx_c31, idx_rho33) = 2.0 * I * std::conj(e2);
  m(idx_c31, idx_c21) = -I * std::conj(e);
  m(idx_c31, idx_c31) = -std::conj(g31);
  m(idx_c31, idx_c32) = I * std::conj(e1);
  s.rhs[idx_c31] = -I * std::conj(e2);

  m(idx_c32, idx_rho22) = -I * std::conj(e);
  m(idx_c32, idx_rho33) = I * std::conj(e);
  m(idx_c32, idx_s21) = -I * std::conj(e2);
  m(idx_c32, idx_c31) = I * e1;
  m(idx_c32, idx_c32) = -std::conj(g32);

  return s;
}

std::array<cplx, 64> ir_drive_matrix_derivative(const PacketParams&) {
  std::array<cplx, 64> d{};
  auto m = [&d](int row, int col) -> cplx& { return d[row * 8 + col]; };
  // d/d(eps) of every matrix entry containing e or e*, for e = eps real.
  m(idx_rho22, idx_s32) = I;
  m(idx_rho22, idx_c32) = -I;
  m(idx_rho33, idx_s32) = -I;
  m(idx_rho33, idx_c32) = I;
  m(idx_s21, idx_s31) = I;
  m(idx_s31, idx_s21) = I;
  m(idx_s32, idx_rho22) = I;
  m(idx_s32, idx_rho33) = -I;
  m(idx_c21, idx_c31) = -I;
  m(idx_c31, idx_c21) = -I;
  m(idx_c32, idx_rho22) = -I;
  m(idx_c32, idx_rho33) = I;
  return d;
}

namespace {

std::string degenerate_message(const RelaxationSpec& r, double cond) {
  std::ostringstream os;
  os << "steady_state: system is ill-conditioned (cond_1 ~ " << cond
     << "); near-degenerate rates:";
  const double ref =
      std::max({r.gamma21, r.gamma31, r.gamma32, r.r21, r.r31, r.r32, r.pump, 1e-300});
  auto name = [&os, ref](const char* n, double v) {
    if (v <= 1e-12 * ref) os << ' ' << n << '=' << v;
  };
  name("gamma21", r.gamma21);
  name("gamma31", r.gamma31);
  name("gamma32", r.gamma32);
  name("r21", r.r21);
  name("r31", r.r31);
  name("r32", r.r32);
  name("pump", r.pump);
  return os.str();
}

std::array<cplx, 8> solve_steady(const PacketParams& p, const SteadySystem& s) {
  auto lu = linalg::lu_factor<8>(s.matrix);
  if (lu.singular)
    throw DegenerateError(degenerate_message(p.relaxation(),
                                             std::numeric_limits<double>::infinity()));
  if (lu.pivot_ratio() > 1e10) {
    const double cond = linalg::condition_1<8>(s.matrix, lu);
    if (cond > 1e12) throw DegenerateError(degenerate_message(p.relaxation(), cond));
  }
  std::array<cplx, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = -s.rhs[i];
  return linalg::solve_refined<8>(s.matrix, lu, b);
}

double residual_max(const SteadySystem& s, const std::array<cplx, 8>& x) {
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    cplx acc = s.rhs[i];
    for (int j = 0; j < 8; ++j) acc += s.matrix[i * 8 + j] * x[j];
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace

PacketState steady_state(const PacketParams& p) {
  const SteadySystem s = build_steady_system(p);
  const auto x = solve_steady(p, s);

  PacketState st;
  st.rho22 = x[idx_rho22].real();
  st.rho33 = x[idx_rho33].real();
  st.rho11 = 1.0 - st.rho22 - st.rho33;
  st.sigma21 = x[idx_s21];
  st.sigma31 = x[idx_s31];
  st.sigma32 = x[idx_s32];
  st.residual = residual_max(s, x);
  const double tol = 1e-9;
  st.positivity_ok = st.rho11 >= -tol && st.rho11 <= 1.0 + tol && st.rho22 >= -tol &&
                     st.rho22 <= 1.0 + tol && st.rho33 >= -tol && st.rho33 <= 1.0 + tol;
  return st;
}

namespace {

PacketState state_from_solution(const SteadySystem& s, const std::array<cplx, 8>& x) {
  PacketState st;
  st.rho22 = x[idx_rho22].real();
  st.rho33 = x[idx_rho33].real();
  st.rho11 = 1.0 - st.rho22 - st.rho33;
  st.sigma21 = x[idx_s21];
  st.sigma31 = x[idx_s31];
  st.sigma32 = x[idx_s32];
  st.residual = residual_max(s, x);
  const double tol = 1e-9;
  st.positivity_ok = st.rho11 >= -tol && st.rho11 <= 1.0 + tol && st.rho22 >= -tol &&
                     st.rho22 <= 1.0 + tol && st.rho33 >= -tol && st.rho33 <= 1.0 + tol;
  return st;
}

void check_probe_limit(const PacketParams& p) {
  if (p.e_ir() != 0.0)
    throw ContractError("ir_linear_response: requires e_ir = 0 (probe limit)");

  // Coherent-population-trapping guard: the dressed 3<->2 linewidth
  // Gamma32 + |e1|^2/Gamma31 + |e2|^2/Gamma21* must not vanish.
  const auto& d = p.detunings();
  const auto& r = p.relaxation();
  const cplx g21{r.gamma21, d.d21};
  const cplx g31{r.gamma31, d.d31};
  const cplx g32{r.gamma32, d.d32};
  cplx dressed = g32;
  if (p.e1() != 0.0) dressed += std::norm(p.e1()) / g31;
  if (p.e2() != 0.0) dressed += std::norm(p.e2()) / std::conj(g21);
  const double scale = r.gamma32 + std::abs(p.e1()) + std::abs(p.e2()) + std::abs(d.d32);
  if (std::abs(dressed) < 1e-12 * std::max(scale, 1e-300))
    throw SingularError(
        "ir_linear_response: dressed 3<->2 linewidth vanishes "
        "(coherent-population-trapping point)");
}

}  // namespace

PacketSolve steady_state_with_response(const PacketParams& p) {
  check_probe_limit(p);

  const SteadySystem s = build_steady_system(p);
  auto lu = linalg::lu_factor<8>(s.matrix);
  if (lu.singular)
    throw DegenerateError(degenerate_message(p.relaxation(),
                                             std::numeric_limits<double>::infinity()));
  if (lu.pivot_ratio() > 1e10) {
    const double cond = linalg::condition_1<8>(s.matrix, lu);
    if (cond > 1e12) throw DegenerateError(degenerate_message(p.relaxation(), cond));
  }
  std::array<cplx, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = -s.rhs[i];
  const auto x0 = linalg::solve_refined<8>(s.matrix, lu, b);

  // x(eps) solves M(eps) x + r = 0, so M x' = -(dM/deps) x0.
  const auto dm = ir_drive_matrix_derivative(p);
  std::array<cplx, 8> bp{};
  for (int i = 0; i < 8; ++i) {
    cplx acc = 0.0;
    for (int j = 0; j < 8; ++j) acc += dm[i * 8 + j] * x0[j];
    bp[i] = -acc;
  }
  const auto xp = linalg::solve_refined<8>(s.matrix, lu, bp);

  PacketSolve out;
  out.state = state_from_solution(s, x0);
  out.response = IrLinearResponse{x0[idx_s32], xp[idx_s32]};
  return out;
}

IrLinearResponse ir_linear_response(const PacketParams& p) {
  return steady_state_with_response(p).response;
}

}  // namespace triwave
