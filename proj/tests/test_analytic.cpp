#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "triwave/analytic.hpp"
#include "triwave/cavity.hpp"
#include "triwave/ensemble.hpp"
#include "triwave/errors.hpp"
#include "triwave/units.hpp"

using namespace triwave;
namespace an = triwave::analytic;

namespace {

// Mid-IR context with equal modal indices; couplings from the same medium.
struct Setup {
  an::AnalyticContext ctx;
  double g2_ir, g2_opt1, g2_opt2;
  RelaxationSpec relax;
};

Setup make_setup(double e1 = 0.5, double e2 = 0.5) {
  Setup s;
  auto& c = s.ctx;
  c.omega1 = 1302.0;
  c.omega2 = 1400.0;
  c.omega = c.omega2 - c.omega1;
  c.d = 2.0;
  c.d1 = 0.5;
  c.d2 = 0.5;
  c.kappa = 0.45;
  c.kappa1 = 0.45;
  c.kappa2 = 0.45;
  c.G = 0.1;
  c.G1 = 0.1;
  c.G2 = 0.1;
  c.gamma21 = c.gamma31 = c.gamma32 = 7.0;
  c.e1 = cplx{e1, 0.0};
  c.e2 = cplx{e2, 0.0};
  const double N = 1e18, mu = 3.3;
  s.g2_ir = coupling_g2(N, c.d, c.omega, mu, c.G).g2;
  s.g2_opt1 = coupling_g2(N, c.d1, c.omega1, mu, c.G1).g2;
  s.g2_opt2 = coupling_g2(N, c.d2, c.omega2, mu, c.G2).g2;
  s.relax = RelaxationSpec(7.0, 7.0, 7.0, 5.0, 0.5, 0.2, 10.0);
  return s;
}

}  // namespace

TEST_CASE("complex linewidth factors") {
  RelaxationSpec r(1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0);

  SUBCASE("zero drives leave the 3<->2 linewidth undressed") {
    const auto f = an::complex_linewidths(r, Detunings{0.5, 0.7, 0.2}, 0.0, 0.0);
    CHECK(f.g32_dressed == f.g32);
  }
  SUBCASE("line center is purely real") {
    const auto f = an::complex_linewidths(r, Detunings{}, 0.0, 0.0);
    CHECK(f.g21 == cplx{1.0, 0.0});
  }
  SUBCASE("direct substitution: gamma 1, shift 2 -> 1 + 2i") {
    const auto f = an::complex_linewidths(r, Detunings{2.0, 0.0, 0.0}, 0.0, 0.0);
    CHECK(f.g21 == cplx{1.0, 2.0});
  }
  SUBCASE("conjugation placement of the drive terms") {
    const auto f =
        an::complex_linewidths(r, Detunings{1.0, 1.5, 0.5}, cplx{0.3, 0.0}, cplx{0.4, 0.0});
    const cplx expected = cplx{3.0, 0.5} + 0.09 / cplx{2.0, 1.5} + 0.16 / cplx{1.0, -1.0};
    CHECK(std::abs(f.g32_dressed - expected) < 1e-15);
  }
}

TEST_CASE("weak-IR closed form: trivial limits and scalings") {
  const Setup s = make_setup();
  const Detunings det{};

  SUBCASE("no drive 1, no field") {
    an::AnalyticContext c = s.ctx;
    c.e1 = 0.0;
    const auto e = an::weak_ir_field_homogeneous(c, s.g2_ir, -0.1, -0.05, det);
    CHECK(std::abs(e.value) == 0.0);
  }

  SUBCASE("explicit inverse cavity-loss scaling") {
    an::AnalyticContext c = s.ctx;
    const auto a = an::weak_ir_field_homogeneous(c, s.g2_ir, -0.1, -0.05, det);
    c.kappa *= 10.0;
    const auto b = an::weak_ir_field_homogeneous(c, s.g2_ir, -0.1, -0.05, det);
    CHECK(std::abs(a.value) == doctest::Approx(10.0 * std::abs(b.value)).epsilon(1e-12));
  }

  SUBCASE("bilinear drive scaling") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
      an::AnalyticContext c = s.ctx;
      const auto base = an::weak_ir_field_homogeneous(c, s.g2_ir, -0.1, -0.05, det);
      const double a = oracles::uniform(rng(), 0.1, 3.0);
      const double b = oracles::uniform(rng(), 0.1, 3.0);
      c.e1 *= a;
      c.e2 *= b;
      // Dressing terms change with the drives; compare against the
      // bilinear prefactor with the dressed linewidth held fixed.
      RelaxationSpec rr(c.gamma21, c.gamma31, c.gamma32, 0, 0, 0, 0);
      const auto f0 = an::complex_linewidths(rr, det, s.ctx.e1, s.ctx.e2);
      const auto f1 = an::complex_linewidths(rr, det, c.e1, c.e2);
      const auto scaled = an::weak_ir_field_homogeneous(c, s.g2_ir, -0.1, -0.05, det);
      const double undressed =
          std::abs(scaled.value) * std::abs(f1.g32_dressed) / std::abs(f0.g32_dressed);
      CHECK(undressed ==
            doctest::Approx(a * b * std::abs(base.value)).epsilon(1e-9));
    }
  }

  SUBCASE("phase covariance: arg(e) shifts by phi2 - phi1") {
    an::AnalyticContext c = s.ctx;
    const auto base = an::weak_ir_field_homogeneous(c, s.g2_ir, -0.1, -0.05, det);
    const double phi1 = 0.31, phi2 = 1.17;
    c.e1 *= std::polar(1.0, phi1);
    c.e2 *= std::polar(1.0, phi2);
    const auto rot = an::weak_ir_field_homogeneous(c, s.g2_ir, -0.1, -0.05, det);
    const double dphi = std::arg(rot.value / base.value);
    CHECK(dphi == doctest::Approx(phi2 - phi1).epsilon(1e-9));
  }

  SUBCASE("validity flag reports the weak-field gate") {
    an::AnalyticContext c = s.ctx;
    const auto weak = an::weak_ir_field_homogeneous(c, s.g2_ir, -1e-4, -1e-4, det);
    CHECK(weak.within_validity);
    const auto strong = an::weak_ir_field_homogeneous(c, 1e6 * s.g2_ir, -0.5, -0.5, det);
    CHECK_FALSE(strong.within_validity);
  }
}

TEST_CASE("weak-IR closed form matches the packet solver exactly in structure") {
  // With populations taken from the full zero-probe solve, the closed form
  // reproduces the solver's parametric source; loop-closed via the mode.
  std::mt19937_64 rng(271828);
  for (int i = 0; i < 30; ++i) {
    const auto U = [&rng](double lo, double hi) { return oracles::uniform(rng(), lo, hi); };
    Setup s = make_setup(U(0.05, 2.0), U(0.05, 2.0));
    s.ctx.e1 *= std::polar(1.0, U(0.0, 6.28));
    s.ctx.e2 *= std::polar(1.0, U(0.0, 6.28));

    Detunings det;
    det.d21 = U(-3.0, 3.0);
    det.d32 = U(-3.0, 3.0);
    det.d31 = det.d21 + det.d32;

    const PacketParams p(det, s.relax, s.ctx.e1, s.ctx.e2, 0.0);
    const PacketSolve sol = steady_state_with_response(p);

    const auto closed = an::weak_ir_field_homogeneous(
        s.ctx, s.g2_ir, sol.state.n12(), sol.state.n13(), det);
    const cplx via_solver =
        cplx{0.0, 1.0} * s.g2_ir * sol.response.source / s.ctx.kappa;
    CHECK(std::abs(closed.value - via_solver) <= 1e-6 * std::abs(via_solver));
  }
}

TEST_CASE("homogeneous magnitude form") {
  SUBCASE("two symmetric terms double the single-term value") {
    Setup s = make_setup();
    an::AnalyticContext c = s.ctx;
    // Make both bracket terms equal: (w/w1) d^2/d1^2 eta1 = (w/w2) d^2/d2^2 eta2.
    c.d2 = c.d1 * std::sqrt(c.omega1 / c.omega2);
    const double both = an::ir_field_homogeneous(c).value;
    an::AnalyticContext one = c;
    one.kappa2 = 1e-12;  // eta2 ~ 0 kills the second term
    const double single = an::ir_field_homogeneous(one).value;
    CHECK(both == doctest::Approx(2.0 * single).epsilon(1e-9));
  }

  SUBCASE("proportional to the IR confinement") {
    Setup s = make_setup();
    an::AnalyticContext c = s.ctx;
    const double base = an::ir_field_homogeneous(c).value;
    c.G = 1e-12;
    CHECK(an::ir_field_homogeneous(c).value < 1e-9 * base);
    c.G = 0.2;
    CHECK(an::ir_field_homogeneous(c).value ==
          doctest::Approx(2.0 * base).epsilon(1e-12));
  }

  SUBCASE("gain-clamp bridge: magnitude form equals the clamped general form") {
    std::mt19937_64 rng(9000);
    for (int i = 0; i < 20; ++i) {
      const auto U = [&rng](double lo, double hi) { return oracles::uniform(rng(), lo, hi); };
      Setup s = make_setup(U(0.05, 0.15 * 7.0), U(0.05, 0.15 * 7.0));
      const auto [n12, n13] = an::gain_clamped_populations(
          s.ctx.kappa1, s.ctx.gamma21, s.g2_opt1, s.ctx.kappa2, s.ctx.gamma31, s.g2_opt2);
      CHECK(n12 < 0.0);
      CHECK(n13 < 0.0);
      const auto general =
          an::weak_ir_field_homogeneous(s.ctx, s.g2_ir, n12, n13, Detunings{});
      const double magnitude = an::ir_field_homogeneous(s.ctx).value;
      CHECK(std::abs(general.value) == doctest::Approx(magnitude).epsilon(0.05));
    }
  }
}

TEST_CASE("down-conversion efficiency parameter") {
  using an::LossRate;
  using an::LossUnit;

  SUBCASE("paper anchor: 2k = 150 cm^-1, 2k1/G1 = 1500 cm^-1, G = 0.1") {
    const double eta = an::eta_parameter(LossRate{75.0, LossUnit::per_cm}, 0.1,
                                         LossRate{75.0, LossUnit::per_cm}, 0.1);
    CHECK(eta == 1.0);
  }
  SUBCASE("ratio identity") {
    const double eta = an::eta_parameter(LossRate{0.3, LossUnit::mev}, 0.25,
                                         LossRate{0.6, LossUnit::mev}, 0.5);
    CHECK(eta == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero IR confinement") {
    CHECK(an::eta_parameter(LossRate{1.0, LossUnit::mev}, 0.1,
                            LossRate{1.0, LossUnit::mev}, 0.0) == 0.0);
  }
  SUBCASE("mixed units are rejected") {
    CHECK_THROWS_AS(an::eta_parameter(LossRate{75.0, LossUnit::per_cm}, 0.1,
                                      LossRate{0.45, LossUnit::mev}, 0.1),
                    ContractError);
  }
}

TEST_CASE("inhomogeneous closed form") {
  SUBCASE("equal widths and linewidths collapse to the single-term form") {
    Setup s = make_setup(0.01, 0.01);
    an::AnalyticContext c = s.ctx;
    c.u21 = c.u31 = c.u32 = 700.0;
    const auto r = an::ir_field_inhomogeneous(c);
    const double single_term = std::abs(c.e1) * std::abs(c.e2) / c.gamma32 *
                               (c.omega / c.omega1) * (c.d * c.d) / (c.d1 * c.d1) *
                               c.eta1();
    CHECK(r.e_abs == doctest::Approx(single_term).epsilon(1e-12));
    CHECK(r.within_validity);
  }

  SUBCASE("intensity form is the squared amplitude by construction") {
    Setup s = make_setup(0.02, 0.035);
    an::AnalyticContext c = s.ctx;
    c.u21 = 500.0;
    c.u31 = 500.0;
    c.u32 = 100.0;
    c.gamma21 = 5.0;
    const auto r = an::ir_field_inhomogeneous(c);
    const double expected =
        std::pow(r.e_abs * c.d1 / (std::abs(c.e1) * c.d), 2);
    CHECK(r.intensity_ratio == expected);

    // At |E2|^2 = |E2|^2_s the drive Rabi amplitude is gamma32/2.
    const double sat = an::saturation_field_sq(c.gamma32, c.d2);
    const double field2 = units::field_V_per_cm(c.gamma32 / 2.0, c.d2);
    CHECK(field2 * field2 == doctest::Approx(sat).epsilon(1e-12));
  }

  SUBCASE("regime flag") {
    Setup s = make_setup(0.01, 0.01);
    an::AnalyticContext c = s.ctx;
    c.u21 = c.u31 = c.u32 = 20.0;  // only ~3x gamma
    CHECK_FALSE(an::ir_field_inhomogeneous(c).within_validity);
  }
}

TEST_CASE("inhomogeneous closed form against the ensemble quadrature") {
  // Unsaturated populations, clamped to the optical losses; fields at the
  // inhomogeneous line centers. At u/gamma = 100 the pole asymptotics are
  // good to better than 10%.
  Setup s = make_setup(1e-3, 1e-3);
  an::AnalyticContext& c = s.ctx;
  c.gamma21 = c.gamma31 = c.gamma32 = 1.0;
  const double u = 100.0;
  c.u21 = c.u31 = c.u32 = u;

  const BroadeningSpec spec(BroadeningKind::gaussian, u, u, u, 2049, 5.0);
  const QuadratureGrid grid = make_grid(spec, 1.0 / u);
  RelaxationSpec rr(c.gamma21, c.gamma31, c.gamma32, 0, 0, 0, 0);
  const cplx e1 = c.e1, e2 = c.e2;
  const NodeFn fn = [&](double xi, cplx* out) {
    Detunings det{u * xi, 2.0 * u * xi, u * xi};
    const auto f = an::complex_linewidths(rr, det, e1, e2);
    out[0] = 1.0 / (std::conj(f.g21) * f.g32_dressed);  // n12 pathway
    out[1] = 1.0 / (f.g31 * f.g32_dressed);             // n13 pathway
    out[2] = 1.0 / f.g21;                               // drive-1 gain kernel
    out[3] = 1.0 / f.g31;                               // drive-2 gain kernel
  };
  const auto avg = average_functional(grid, 4, fn, Exec::parallel);

  // Clamp the unsaturated populations to the optical losses.
  const double n12 = -c.kappa1 / (s.g2_opt1 * avg.mean[2].real());
  const double n13 = -c.kappa2 / (s.g2_opt2 * avg.mean[3].real());
  CHECK(n12 < 0.0);
  CHECK(n12 > -1.0);  // physically admissible inversion

  const cplx quad = cplx{0.0, 1.0} * s.g2_ir * std::conj(e1) * e2 *
                    (n12 * avg.mean[0] + n13 * avg.mean[1]) / c.kappa;
  const auto closed = an::ir_field_inhomogeneous(c);
  CHECK(std::abs(quad) == doctest::Approx(closed.e_abs).epsilon(0.10));
}

TEST_CASE("hole-burning closed form") {
  const double gamma = 1.0;
  const RelaxationSpec relax(gamma, gamma, gamma, gamma, gamma, gamma, 0.3);

  Setup s = make_setup(15.0, 15.0);
  an::AnalyticContext c = s.ctx;
  c.gamma21 = c.gamma31 = c.gamma32 = gamma;
  c.u21 = c.u31 = 300.0;
  c.u32 = 30.0;

  SUBCASE("symmetric brackets give 0.8x the common factor") {
    an::AnalyticContext cc = c;
    cc.d2 = cc.d1 * std::sqrt(cc.omega1 / cc.omega2);  // equal brackets
    const double common = (cc.omega / cc.omega1) * (cc.d * cc.d) / (cc.d1 * cc.d1) *
                          cc.eta1();
    const double expected =
        std::abs(cc.e1) * std::abs(cc.e2) * cc.u21 / (gamma * cc.u32) * 0.8 * common;
    CHECK(an::ir_field_holeburning(cc, relax) ==
          doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("suppressing the second pathway leaves the 0.9 term") {
    an::AnalyticContext cc = c;
    cc.kappa2 = 1e-12;  // eta2 -> 0
    const double expected = std::abs(cc.e1) * std::abs(cc.e2) * cc.u21 /
                            (gamma * cc.u32) * 0.9 * (cc.omega / cc.omega1) *
                            (cc.d * cc.d) / (cc.d1 * cc.d1) * cc.eta1();
    CHECK(an::ir_field_holeburning(cc, relax) ==
          doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("assumption gates are enforced and listed") {
    an::AnalyticContext cc = c;
    cc.e2 = cplx{14.0, 0.0};
    RelaxationSpec bad(gamma, 2.0 * gamma, gamma, gamma, gamma, 3.0 * gamma, 0.3);
    try {
      an::ir_field_holeburning(cc, bad);
      FAIL("expected ContractError");
    } catch (const ContractError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("|e1| != |e2|") != std::string::npos);
      CHECK(msg.find("unequal gamma_ik") != std::string::npos);
      CHECK(msg.find("unequal population rates") != std::string::npos);
    }
  }
}

TEST_CASE("bilinear drive scaling of the magnitude closed forms") {
  std::mt19937_64 rng(606);
  const double gamma = 1.0;
  const RelaxationSpec relax(gamma, gamma, gamma, gamma, gamma, gamma, 0.3);
  for (int i = 0; i < 20; ++i) {
    Setup s = make_setup(15.0, 15.0);
    an::AnalyticContext c = s.ctx;
    c.gamma21 = c.gamma31 = c.gamma32 = gamma;
    c.u21 = c.u31 = 300.0;
    c.u32 = 30.0;
    const double a = oracles::uniform(rng(), 0.5, 2.0);
    const double b = oracles::uniform(rng(), 0.5, 2.0);

    an::AnalyticContext scaled = c;
    scaled.e1 *= a;
    scaled.e2 *= b;
    CHECK(an::ir_field_homogeneous(scaled).value ==
          doctest::Approx(a * b * an::ir_field_homogeneous(c).value).epsilon(1e-12));
    CHECK(an::ir_field_inhomogeneous(scaled).e_abs ==
          doctest::Approx(a * b * an::ir_field_inhomogeneous(c).e_abs).epsilon(1e-12));

    // The hole-burning form requires |e1| = |e2| and its regime gates cap
    // the admissible scaling window.
    const double q = oracles::uniform(rng(), 0.7, 1.9);
    an::AnalyticContext hb = c;
    hb.e1 *= q;
    hb.e2 *= q;
    CHECK(an::ir_field_holeburning(hb, relax) ==
          doctest::Approx(q * q * an::ir_field_holeburning(c, relax)).epsilon(1e-12));
  }
}

TEST_CASE("saturation scale") {
  const double base = an::saturation_field_sq(7.0, 0.5);
  CHECK(an::saturation_field_sq(14.0, 0.5) == doctest::Approx(4.0 * base).epsilon(1e-12));
  CHECK(an::saturation_field_sq(7.0, 1.0) == doctest::Approx(base / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS(an::saturation_field_sq(0.0, 1.0), DomainError);
}
