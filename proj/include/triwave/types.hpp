#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "triwave/errors.hpp"

// Shared domain types for the three-level scheme: one low level (1) and two
// upper levels (2, 3). Fields: optical drive 1 on 2<->1, optical drive 2 on
// 3<->1, generated field on the 3<->2 transition. All types are immutable
// after construction and safe to share across threads.

namespace triwave {

using cplx = std::complex<double>;

class LevelScheme {
 public:
  LevelScheme(double e1_mev, double e2_mev, double e3_mev)
      : e1_(e1_mev), e2_(e2_mev), e3_(e3_mev) {
    if (!(std::isfinite(e1_mev) && std::isfinite(e2_mev) && std::isfinite(e3_mev)))
      throw ValidationError("LevelScheme: energies must be finite");
    if (!(e3_mev > e2_mev && e2_mev > e1_mev))
      throw ValidationError("LevelScheme: require E3 > E2 > E1 (got " +
                            std::to_string(e1_mev) + ", " + std::to_string(e2_mev) +
                            ", " + std::to_string(e3_mev) + " meV)");
  }

  double e1() const { return e1_; }
  double e2() const { return e2_; }
  double e3() const { return e3_; }

  double omega21() const { return e2_ - e1_; }
  double omega32() const { return e3_ - e2_; }
  // Defined as the sum so the closed-loop identity holds exactly in floats.
  double omega31() const { return omega21() + omega32(); }

 private:
  double e1_, e2_, e3_;
};

class DipoleSet {
 public:
  DipoleSet(double d21_enm, double d31_enm, double d32_enm)
      : d21_(d21_enm), d31_(d31_enm), d32_(d32_enm) {
    if (!(d21_enm > 0.0 && d31_enm > 0.0 && d32_enm > 0.0))
      throw ValidationError(
          "DipoleSet: all three transitions must be dipole-allowed (d > 0)");
  }
  double d21() const { return d21_; }
  double d31() const { return d31_; }
  double d32() const { return d32_; }

 private:
  double d21_, d31_, d32_;
};

// Phenomenological relaxation and pumping. gamma_ik are coherence decay
// rates; r32/r31/r21 are population channels 3->2, 3->1, 2->1; pump is an
// incoherent rate 1->3 (bipolar injection collapsed onto a closed
// three-level system, so the trace is conserved by construction).
struct RelaxationSpec {
  double gamma21 = 0.0, gamma31 = 0.0, gamma32 = 0.0;
  double r32 = 0.0, r31 = 0.0, r21 = 0.0;
  double pump = 0.0;

  RelaxationSpec() = default;
  RelaxationSpec(double g21, double g31, double g32, double r32_, double r31_,
                 double r21_, double pump_)
      : gamma21(g21), gamma31(g31), gamma32(g32), r32(r32_), r31(r31_), r21(r21_),
        pump(pump_) {
    for (double v : {g21, g31, g32, r32_, r31_, r21_, pump_})
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ValidationError("RelaxationSpec: all rates must be finite and >= 0");
  }
};

enum class FieldRole { optical1, optical2, ir };

struct DriveField {
  cplx rabi;       // complex Rabi amplitude (meV)
  double omega;    // carrier frequency (meV)
  double kx;       // longitudinal wavenumber (um^-1)
  FieldRole role;

  DriveField(cplx rabi_, double omega_, double kx_, FieldRole role_)
      : rabi(rabi_), omega(omega_), kx(kx_), role(role_) {
    if (!(omega_ > 0.0)) throw ValidationError("DriveField: omega must be > 0");
    if (!std::isfinite(std::abs(rabi_)))
      throw ValidationError("DriveField: Rabi amplitude must be finite");
  }
};

// Rotating-frame detunings including any per-packet shift. By construction
// d31 = d21 + d32 exactly.
struct Detunings {
  double d21 = 0.0;  // omega21 - omega1
  double d31 = 0.0;  // omega31 - omega2
  double d32 = 0.0;  // omega32 - (omega2 - omega1)
};

// Detunings of the three fields from the (unshifted) line centers. The
// rotating frame exists only on the three-photon resonance omega = omega2 -
// omega1, enforced here as an exact precondition.
inline Detunings closed_loop_detunings(const LevelScheme& levels, double omega1,
                                       double omega2, double omega) {
  if (omega != omega2 - omega1)
    throw ContractError(
        "closed_loop_detunings: three-photon resonance violated, require "
        "omega = omega2 - omega1 exactly");
  Detunings d;
  d.d21 = levels.omega21() - omega1;
  d.d32 = levels.omega32() - omega;
  d.d31 = d.d21 + d.d32;
  return d;
}

}  // namespace triwave
