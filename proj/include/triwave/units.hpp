#pragma once

#include <cmath>

#include "triwave/errors.hpp"

// Internal unit system: hbar = 1, energies and rates in meV, lengths in um,
// carrier density in cm^-3. Waveguide losses are accepted in cm^-1 at the
// boundary and converted once. Rabi amplitudes e = d*E/(2 hbar) are the
// canonical field variable; raw field strength (V/cm) appears only in
// reporting helpers.

namespace triwave::units {

inline constexpr double pi = 3.14159265358979323846;

// CODATA / SI-exact base constants.
inline constexpr double c_cm_per_s = 2.99792458e10;
inline constexpr double c_um_per_s = 2.99792458e14;
inline constexpr double c_m_per_s = 2.99792458e8;
inline constexpr double elementary_charge_C = 1.602176634e-19;
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double eps0_F_per_m = 8.8541878128e-12;

// 1 meV / hbar = 1.519267e12 rad/s.
inline constexpr double meV_to_rad_per_s =
    1e-3 * elementary_charge_C / hbar_J_s;
inline constexpr double rad_per_s_to_meV = 1.0 / meV_to_rad_per_s;

// hc = 1239.84 meV*um: E[meV] * lambda[um] = 1239.84.
inline constexpr double hc_meV_um = 1239.84;

// 1 e*nm in esu*cm (Gaussian units), for the coupling-constant formula.
inline constexpr double e_nm_to_esu_cm = elementary_charge_C * c_m_per_s * 10.0 * 1e-7;
// 1 meV in erg.
inline constexpr double meV_to_erg = elementary_charge_C * 1e-3 * 1e7;

// Conversion table between the internal system and laboratory units.
// All conversions are exact inverses of each other by construction.
struct UnitTable {
  double mev_to_rad_per_s = meV_to_rad_per_s;
  double hc_mev_um = hc_meV_um;
  double c_cm = c_cm_per_s;

  double rad_per_s_from_mev(double e_mev) const { return e_mev * mev_to_rad_per_s; }
  double mev_from_rad_per_s(double w) const { return w / mev_to_rad_per_s; }

  // Vacuum wavelength (um) of a photon with energy E (meV).
  double wavelength_um(double e_mev) const {
    if (!(e_mev > 0.0)) throw DomainError("wavelength_from_energy: E must be > 0 meV");
    return hc_mev_um / e_mev;
  }
  double energy_mev(double lambda_um) const {
    if (!(lambda_um > 0.0)) throw DomainError("energy_from_wavelength: lambda must be > 0 um");
    return hc_mev_um / lambda_um;
  }

  // Intensity loss alpha (cm^-1) -> field amplitude decay rate kappa (meV),
  // kappa = alpha*c/(2 mu). The factor 2 converts intensity loss to an
  // amplitude rate, so 2*kappa corresponds to the quoted intensity loss.
  double loss_cm_to_rate_mev(double alpha_cm, double mu) const {
    if (!(mu > 0.0)) throw DomainError("loss_cm_to_rate: refractive index must be > 0");
    if (alpha_cm < 0.0) throw DomainError("loss_cm_to_rate: loss must be >= 0");
    return alpha_cm * c_cm / (2.0 * mu) * rad_per_s_to_meV;
  }
  double rate_mev_to_loss_cm(double kappa_mev, double mu) const {
    if (!(mu > 0.0)) throw DomainError("rate_to_loss_cm: refractive index must be > 0");
    return kappa_mev * mev_to_rad_per_s * 2.0 * mu / c_cm;
  }

  // Longitudinal wavenumber (um^-1) of a mode with index mu at energy omega.
  double wavenumber_per_um(double omega_mev, double mu) const {
    return mu * omega_mev * mev_to_rad_per_s / c_um_per_s;
  }
};

inline constexpr UnitTable unit_table{};

inline double wavelength_from_energy(double e_mev) {
  return unit_table.wavelength_um(e_mev);
}
inline double loss_cm_to_rate(double alpha_cm, double /*omega_mev*/, double mu) {
  // omega is accepted for interface symmetry; the conversion itself is
  // frequency independent once mu is the modal (group) index at omega.
  return unit_table.loss_cm_to_rate_mev(alpha_cm, mu);
}

// --- reporting helpers -----------------------------------------------------

// Peak field amplitude (V/cm) corresponding to a Rabi amplitude (meV) on a
// transition with dipole d (e*nm): E = 2*hbar*e_rabi/d; 1 meV/(e*nm) = 1e4 V/cm.
inline double field_V_per_cm(double rabi_mev, double d_enm) {
  if (!(d_enm > 0.0)) throw DomainError("field_V_per_cm: dipole must be > 0");
  return 2.0 * rabi_mev / d_enm * 1e4;
}

// Running-wave intensity (W/cm^2) of a field with peak amplitude E (V/cm) in
// a medium with refractive index mu: I = (1/2) c eps0 mu E^2.
inline double intensity_W_per_cm2(double field_V_cm, double mu) {
  const double field_V_m = field_V_cm * 1e2;
  const double i_W_m2 = 0.5 * c_m_per_s * eps0_F_per_m * mu * field_V_m * field_V_m;
  return i_W_m2 * 1e-4;
}

// Photon flux (cm^-2 s^-1) carried by intensity I at photon energy omega.
inline double photon_flux_per_cm2_s(double intensity_W_cm2, double omega_mev) {
  if (!(omega_mev > 0.0)) throw DomainError("photon_flux: photon energy must be > 0");
  const double photon_J = omega_mev * 1e-3 * elementary_charge_C;
  return intensity_W_cm2 / photon_J;
}

}  // namespace triwave::units
