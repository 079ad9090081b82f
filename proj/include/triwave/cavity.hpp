#pragma once

#include "triwave/ensemble.hpp"
#include "triwave/types.hpp"

// Electromagnetic side: the medium-field coupling constant, the cavity-mode
// steady state, phase matching, the self-consistent IR amplitude with full
// saturation, and reported flux/power with the one-photon-per-photon cap.

namespace triwave {

struct CavityModeSpec {
  double omega_c;       // mode frequency (meV)
  double kappa;         // field decay rate (meV)
  double G;             // confinement factor
  double mu;            // modal refractive index
  double kx;            // longitudinal wavenumber (um^-1)
  double volume_um3;    // cavity volume (reporting only)

  CavityModeSpec(double omega_c, double kappa, double G, double mu, double kx,
                 double volume_um3 = 0.0);

  // kx derived from the index: kx = mu * omega_c / (hbar c).
  static CavityModeSpec from_index(double omega_c, double kappa, double G, double mu,
                                   double volume_um3 = 0.0);
};

// g^2 = 2 pi omega d^2 N G / (hbar mu^2), evaluated in internal units
// (meV^2 per unit dimensionless polarization).
struct CouplingConstant {
  double g2;  // meV^2
  double density_cm3, dipole_enm, omega_mev, mu, G;
};

CouplingConstant coupling_g2(double density_cm3, double dipole_enm, double omega_mev,
                             double mu, double G);

// Steady state of the mode amplitude equation
//   de/dt + (kappa + i(omega_c - omega)) e = source,
// i.e. a Lorentzian mode response e = source / (kappa + i(omega_c - omega)).
cplx mode_steady_field(cplx source, const CavityModeSpec& mode, double omega_mev);

struct PhaseMatch {
  double delta_k;  // kx_ir - (k2x - k1x), um^-1
  bool matched;    // |delta_k| * L < pi
};
PhaseMatch phase_mismatch(double k1x, double k2x, double kx_ir, double device_length_um);

// Quantum conversion bound: at most one IR photon per optical photon.
double manley_rowe_cap(double flux_ir, double flux_opt1, double flux_opt2,
                       bool* capped = nullptr);

struct FixedPointOptions {
  double beta = 0.5;    // damping of the fixed-point map
  int max_iter = 500;
  double rtol = 1e-8;
};

struct IRSolution {
  cplx e;                      // converged IR Rabi amplitude (meV)
  double intensity_W_cm2 = 0.0;
  double photon_flux = 0.0;    // cm^-2 s^-1, capped when the bound binds
  double flux_opt1 = 0.0, flux_opt2 = 0.0;
  bool converged = false;
  int iterations = 0;
  bool cap_applied = false;
  bool weak_gate_ok = true;    // |e| < min gamma_ik validity flag
  double last_residual = 0.0;
};

// Optical-drive description needed only for reporting (intensities, fluxes).
struct FieldReport {
  double omega_mev;
  double dipole_enm;
  double mu;
};

// Fixed point of e -> mode_steady_field(g^2 <s32(e)>, ...) with damped
// iteration e' = (1-beta) e + beta map(e); each map evaluation solves every
// ensemble packet with the current IR drive (non-perturbative).
struct FixedPointOutcome {
  cplx e;
  bool converged = false;
  int iterations = 0;
  double last_residual = 0.0;
};
FixedPointOutcome fixed_point_ir(const PacketParams& prototype,
                                 const BroadeningSpec& broadening,
                                 const CavityModeSpec& mode, double g2_ir,
                                 double omega_ir_mev,
                                 const FixedPointOptions& opt = {},
                                 Exec exec = Exec::parallel);

// Full solution with reporting: intensity, photon fluxes, conversion cap,
// weak-validity flag.
IRSolution self_consistent_ir(const PacketParams& prototype,
                              const BroadeningSpec& broadening,
                              const CavityModeSpec& mode, double g2_ir,
                              const FieldReport& ir, const FieldReport& opt1,
                              const FieldReport& opt2,
                              const FixedPointOptions& opt = {},
                              Exec exec = Exec::parallel);

// Out-coupled power (mW): photon rate through the facet area times the
// photon energy times the out-coupling fraction, using the (capped) flux.
double output_power_mw(const IRSolution& sol, double facet_area_um2,
                       double out_coupling, double omega_ir_mev);

}  // namespace triwave
