#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "triwave/ensemble.hpp"
#include "triwave/errors.hpp"

using namespace triwave;

namespace {

RelaxationSpec lasing_rates() {
  return RelaxationSpec(7.0, 7.0, 7.0, 5.0, 0.5, 0.2, 10.0);
}

PacketParams two_drive_packet(double e1, double e2, const RelaxationSpec& r) {
  Detunings det{};
  return PacketParams(det, r, cplx{e1, 0.0}, cplx{e2, 0.0}, 0.0);
}

}  // namespace

TEST_CASE("broadening spec invariants") {
  CHECK_THROWS_AS(BroadeningSpec(BroadeningKind::homogeneous, 1.0, 0.0, 0.0),
                  ValidationError);
  CHECK_THROWS_AS(BroadeningSpec(BroadeningKind::gaussian, 0.0, 0.0, 0.0),
                  ValidationError);
  CHECK_THROWS_AS(BroadeningSpec(BroadeningKind::gaussian, 1.0, 1.0, 1.0, 9),
                  ValidationError);
  CHECK_THROWS_AS(BroadeningSpec(BroadeningKind::gaussian, 1.0, 1.0, 1.0, 129, 2.0),
                  ValidationError);
  CHECK_NOTHROW(BroadeningSpec(BroadeningKind::lorentzian, 1.0, 0.0, 0.5));
}

TEST_CASE("distribution weights") {
  CHECK(distribution_weight(0.0, BroadeningKind::gaussian) ==
        doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-14));
  for (double xi : {0.3, 1.7, 4.2}) {
    CHECK(distribution_weight(xi, BroadeningKind::gaussian) ==
          distribution_weight(-xi, BroadeningKind::gaussian));
    CHECK(distribution_weight(xi, BroadeningKind::lorentzian) ==
          distribution_weight(-xi, BroadeningKind::lorentzian));
  }
  CHECK_THROWS_AS(distribution_weight(0.0, BroadeningKind::homogeneous), ContractError);
}

TEST_CASE("quadrature mass: gaussian to 1e-8, lorentzian to its tail formula") {
  const BroadeningSpec gauss(BroadeningKind::gaussian, 1.0, 1.0, 1.0, 129, 5.0);
  const QuadratureGrid g1 = make_grid(gauss, 1.0);
  double mass = 0.0;
  for (double w : g1.weight) mass += w;
  CHECK(std::abs(mass - 1.0) < 1e-8);

  const BroadeningSpec lor(BroadeningKind::lorentzian, 1.0, 1.0, 1.0, 513, 5.0);
  const QuadratureGrid g2 = make_grid(lor, 1.0);
  mass = 0.0;
  for (double w : g2.weight) mass += w;
  const double expected = 1.0 - (2.0 / M_PI) * std::atan(1.0 / 5.0);
  CHECK(mass == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("homogeneous kind reduces bit-identically to the packet solve") {
  const PacketParams p = two_drive_packet(1.0, 1.2, lasing_rates());
  const BroadeningSpec spec;  // homogeneous
  const EnsembleResult r = ensemble_average(p, spec);
  const PacketSolve sol = steady_state_with_response(p);
  CHECK(r.sigma32_source == sol.response.source);
  CHECK(r.ir_slope == sol.response.slope);
  CHECK(r.rho22 == sol.state.rho22);
  CHECK(r.rho33 == sol.state.rho33);
  CHECK(r.nodes == 1);
  CHECK(r.quad_error == 0.0);
}

TEST_CASE("vanishing width limit recovers the single packet") {
  const RelaxationSpec relax = lasing_rates();
  const PacketParams p = two_drive_packet(1.0, 1.2, relax);
  const double u = 1e-4 * relax.gamma21;
  const BroadeningSpec spec(BroadeningKind::gaussian, u, u, u, 129, 5.0);
  const EnsembleResult r = ensemble_average(p, spec);
  const PacketSolve sol = steady_state_with_response(p);
  CHECK(std::abs(r.sigma32_source - sol.response.source) <=
        1e-6 * std::abs(sol.response.source));
  CHECK(std::abs(r.rho22 - sol.state.rho22) <= 1e-6 * sol.state.rho22);
}

TEST_CASE("lorentzian line: averaged linear response shows gamma_eff = gamma + u") {
  const RelaxationSpec relax = lasing_rates();
  const double gamma = relax.gamma21;
  const double e1 = 1e-4 * gamma;
  const PacketParams p0 = two_drive_packet(0.0, 0.0, relax);
  const double n12_0 = steady_state(p0).n12();

  const PacketParams p = two_drive_packet(e1, 0.0, relax);
  const double u21 = 100.0 * gamma;
  const BroadeningSpec spec(BroadeningKind::lorentzian, u21, 0.0, 0.0, 513, 5.0);
  const EnsembleResult r = ensemble_average(p, spec);

  const double expected = n12_0 / (gamma + u21);
  CHECK(r.sigma21_per_e1.imag() == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("node-count doubling changes the average by less than 1e-6") {
  const RelaxationSpec relax = lasing_rates();
  const PacketParams p = two_drive_packet(2.0, 2.5, relax);
  const double u = 20.0 * relax.gamma21;
  const BroadeningSpec coarse(BroadeningKind::gaussian, u, u, 0.2 * u, 513, 5.0);
  const BroadeningSpec fine(BroadeningKind::gaussian, u, u, 0.2 * u, 1025, 5.0);
  const EnsembleResult a = ensemble_average(p, coarse);
  const EnsembleResult b = ensemble_average(p, fine);
  CHECK(std::abs(a.sigma32_source - b.sigma32_source) <=
        1e-6 * std::abs(b.sigma32_source));
  // The half-resolution error estimate is conservative; it tightens once
  // the halved grid itself resolves the dephasing-scale structure.
  const BroadeningSpec dense(BroadeningKind::gaussian, u, u, 0.2 * u, 2049, 5.0);
  CHECK(ensemble_average(p, dense).quad_error < 1e-6);
}

TEST_CASE("serial and parallel execution are bit-identical") {
  const RelaxationSpec relax = lasing_rates();
  const PacketParams p = two_drive_packet(1.5, 2.0, relax);
  const double u = 30.0 * relax.gamma21;
  const BroadeningSpec spec(BroadeningKind::gaussian, u, u, 0.1 * u, 257, 5.0);
  const EnsembleResult a = ensemble_average(p, spec, Exec::serial);
  const EnsembleResult b = ensemble_average(p, spec, Exec::parallel);
  CHECK(a.sigma32_source.real() == b.sigma32_source.real());
  CHECK(a.sigma32_source.imag() == b.sigma32_source.imag());
  CHECK(a.ir_slope.real() == b.ir_slope.real());
  CHECK(a.path12.real() == b.path12.real());
  CHECK(a.rho22 == b.rho22);
  CHECK(a.node_max_n23 == b.node_max_n23);
}

TEST_CASE("symmetric line at line center: odd integrands average to zero") {
  // Im(1/Gamma21) is odd in the shift; its symmetric average vanishes.
  const BroadeningSpec spec(BroadeningKind::gaussian, 10.0, 10.0, 1.0, 257, 5.0);
  const QuadratureGrid grid = make_grid(spec, 0.1);
  const NodeFn fn = [&spec](double xi, cplx* out) {
    out[0] = 1.0 / cplx{1.0, spec.u21 * xi};
  };
  const AverageResult r = average_functional(grid, 1, fn, Exec::serial);
  CHECK(std::abs(r.mean[0].imag()) < 1e-12);
  CHECK(r.mean[0].real() > 0.0);
}

TEST_CASE("on-resonance averaged |sigma21/e1| decreases with broadening") {
  const RelaxationSpec relax = lasing_rates();
  const double e1 = 1e-3 * relax.gamma21;
  const PacketParams p = two_drive_packet(e1, 0.0, relax);
  double prev = std::numeric_limits<double>::infinity();
  for (double ufac : {10.0, 30.0, 100.0}) {
    const double u = ufac * relax.gamma21;
    const BroadeningSpec spec(BroadeningKind::gaussian, u, 0.0, 0.0, 257, 5.0);
    const EnsembleResult r = ensemble_average(p, spec);
    const double v = std::abs(r.sigma21_per_e1);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("packet failure is reported with the node's xi") {
  const BroadeningSpec spec(BroadeningKind::gaussian, 1.0, 1.0, 1.0, 17, 5.0);
  const QuadratureGrid grid = make_grid(spec, 1.0);
  const NodeFn fn = [](double xi, cplx* out) {
    if (xi > 2.0) throw std::runtime_error("synthetic packet failure");
    out[0] = xi;
  };
  try {
    evaluate_nodes(grid, 1, fn, Exec::parallel);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("xi") != std::string::npos);
    CHECK(msg.find("synthetic packet failure") != std::string::npos);
  }
}

TEST_CASE("hole burning") {
  // All gamma and population rates equal (the hole-burning closed form's
  // structural assumption), weak pump.
  const double gamma = 1.0;
  const RelaxationSpec relax(gamma, gamma, gamma, gamma, gamma, gamma, 0.3 * gamma);
  const double e_d = 12.0;
  const PacketParams p = two_drive_packet(e_d, e_d, relax);
  const double u = 150.0;
  const BroadeningSpec spec(BroadeningKind::gaussian, u, u, 0.1 * u, 801, 5.0);

  SUBCASE("strong drives burn a deep hole in |n12| at the line center") {
    // Full-solver scan over the shift variable.
    auto n12_at = [&](double xi) {
      const PacketParams pp = p.with_shift(u * xi, u * xi, 0.1 * u * xi);
      return steady_state(pp).n12();
    };
    const double center = std::abs(n12_at(0.0));
    const double wing = std::abs(n12_at(0.5));  // nu = 75 >> |e1|
    CHECK(center < 0.5 * wing);
  }

  SUBCASE("regime validation") {
    const PacketParams weak = two_drive_packet(5.0, 5.0, relax);
    CHECK_THROWS_AS(holeburning_average(weak, spec), RegimeError);

    const BroadeningSpec narrow(BroadeningKind::gaussian, 50.0, 50.0, 5.0, 801, 5.0);
    CHECK_THROWS_AS(holeburning_average(p, narrow), RegimeError);

    const BroadeningSpec homo;
    CHECK_THROWS_AS(holeburning_average(p, homo), RegimeError);
  }

  SUBCASE("hole refinement at N nodes matches the unrefined grid at 10N") {
    const EnsembleResult refined = holeburning_average(p, spec, true);
    const BroadeningSpec dense(BroadeningKind::gaussian, u, u, 0.1 * u, 8009, 5.0);
    const EnsembleResult plain = holeburning_average(p, dense, false);
    CHECK(std::abs(refined.sigma32_source - plain.sigma32_source) <=
          1e-4 * std::abs(plain.sigma32_source));
  }
}
