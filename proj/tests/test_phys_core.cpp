#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "triwave/types.hpp"
#include "triwave/units.hpp"

using namespace triwave;
namespace u = triwave::units;

TEST_CASE("wavelength from energy: mid-IR and far-IR anchors") {
  // 98 meV intersubband spacing sits near 13 um.
  CHECK(u::wavelength_from_energy(98.0) == doctest::Approx(12.65).epsilon(1e-3));
  // Conversion constant: 1239.84 meV <-> 1 um.
  CHECK(u::wavelength_from_energy(1239.84) == doctest::Approx(1.0).epsilon(1e-12));
  // Heavy-hole subband anchor near 60 um.
  CHECK(u::wavelength_from_energy(20.66) == doctest::Approx(60.0).epsilon(1e-3));
  CHECK_THROWS_AS(u::wavelength_from_energy(0.0), DomainError);
  CHECK_THROWS_AS(u::wavelength_from_energy(-3.0), DomainError);
}

TEST_CASE("meV <-> rad/s conversion constant and round trip") {
  CHECK(u::meV_to_rad_per_s == doctest::Approx(1.519267e12).epsilon(1e-6));
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 200; ++i) {
    const double e = oracles::uniform(rng(), 1e-6, 1e6);
    const double back = u::unit_table.mev_from_rad_per_s(u::unit_table.rad_per_s_from_mev(e));
    CHECK(std::abs(back - e) <= 1e-12 * e);
    const double lam = u::unit_table.wavelength_um(e);
    CHECK(std::abs(u::unit_table.energy_mev(lam) - e) <= 1e-12 * e);
  }
}

TEST_CASE("loss conversion: zero loss, index homogeneity, round trip") {
  CHECK(u::loss_cm_to_rate(0.0, 98.0, 3.3) == 0.0);

  const double k1 = u::loss_cm_to_rate(100.0, 98.0, 3.3);
  const double k2 = u::loss_cm_to_rate(100.0, 98.0, 6.6);
  CHECK(k1 == doctest::Approx(2.0 * k2).epsilon(1e-12));

  // 150 cm^-1 at 17 um in a mu = 3.3 waveguide, and back.
  const double omega = u::unit_table.energy_mev(17.0);
  const double kappa = u::loss_cm_to_rate(150.0, omega, 3.3);
  CHECK(u::unit_table.rate_mev_to_loss_cm(kappa, 3.3) ==
        doctest::Approx(150.0).epsilon(1e-12));
  CHECK_THROWS_AS(u::loss_cm_to_rate(100.0, 98.0, 0.0), DomainError);
}

TEST_CASE("LevelScheme rejects non-monotone energies, closes the loop exactly") {
  CHECK_THROWS_AS(LevelScheme(0.0, 1400.0, 1302.0), ValidationError);
  CHECK_THROWS_AS(LevelScheme(10.0, 10.0, 20.0), ValidationError);

  std::mt19937_64 rng(777);
  for (int i = 0; i < 100; ++i) {
    const double e1 = oracles::uniform(rng(), -50.0, 50.0);
    const double e2 = e1 + oracles::uniform(rng(), 1e-3, 2000.0);
    const double e3 = e2 + oracles::uniform(rng(), 1e-3, 500.0);
    const LevelScheme lv(e1, e2, e3);
    CHECK(lv.omega31() == lv.omega21() + lv.omega32());
  }
}

TEST_CASE("DipoleSet requires all transitions allowed") {
  CHECK_THROWS_AS(DipoleSet(0.0, 0.5, 2.0), ValidationError);
  CHECK_THROWS_AS(DipoleSet(0.5, -0.1, 2.0), ValidationError);
  const DipoleSet d(0.5, 0.5, 2.0);
  CHECK(d.d32() == 2.0);
}

TEST_CASE("DriveField validation") {
  CHECK_NOTHROW(DriveField(cplx{1.0, 0.5}, 98.0, 1.64, FieldRole::ir));
  CHECK_THROWS_AS(DriveField(cplx{1.0, 0.0}, 0.0, 1.0, FieldRole::optical1),
                  ValidationError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(DriveField(cplx{inf, 0.0}, 98.0, 1.0, FieldRole::optical2),
                  ValidationError);
}

TEST_CASE("closed-loop detunings") {
  const LevelScheme lv(0.0, 1302.0, 1400.0);

  SUBCASE("all fields at line centers") {
    const auto d = closed_loop_detunings(lv, 1302.0, 1400.0, 98.0);
    CHECK(d.d21 == 0.0);
    CHECK(d.d31 == 0.0);
    CHECK(d.d32 == 0.0);
  }

  SUBCASE("omega1 shifted by +1 meV") {
    const double w1 = 1303.0;
    const auto d = closed_loop_detunings(lv, w1, 1400.0, 1400.0 - w1);
    CHECK(d.d21 == doctest::Approx(-1.0));
    CHECK(d.d31 == doctest::Approx(0.0));
    CHECK(d.d32 == doctest::Approx(1.0));
  }

  SUBCASE("three-photon resonance is a hard precondition") {
    CHECK_THROWS_AS(closed_loop_detunings(lv, 1302.0, 1400.0, 97.5), ContractError);
  }

  SUBCASE("loop identity holds to machine precision for random inputs") {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 200; ++i) {
      const double w1 = oracles::uniform(rng(), 1200.0, 1350.0);
      const double w2 = oracles::uniform(rng(), 1360.0, 1500.0);
      const auto d = closed_loop_detunings(lv, w1, w2, w2 - w1);
      CHECK(d.d31 - d.d21 - d.d32 == 0.0);
    }
  }
}
