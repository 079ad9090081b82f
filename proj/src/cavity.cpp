#include "triwave/cavity.hpp"

#include <cmath>
#include <sstream>

#include "triwave/errors.hpp"
#include "triwave/units.hpp"

namespace triwave {

CavityModeSpec::CavityModeSpec(double omega_c_, double kappa_, double G_, double mu_,
                               double kx_, double volume_um3_)
    : omega_c(omega_c_), kappa(kappa_), G(G_), mu(mu_), kx(kx_), volume_um3(volume_um3_) {
  if (!(omega_c > 0.0)) throw ValidationError("CavityModeSpec: omega_c must be > 0");
  if (!(kappa > 0.0)) throw ValidationError("CavityModeSpec: kappa must be > 0");
  if (!(G > 0.0 && G <= 1.0))
    throw ValidationError("CavityModeSpec: confinement must be in (0, 1]");
  if (!(mu > 0.0)) throw ValidationError("CavityModeSpec: index must be > 0");
}

CavityModeSpec CavityModeSpec::from_index(double omega_c, double kappa, double G,
                                          double mu, double volume_um3) {
  const double kx = units::unit_table.wavenumber_per_um(omega_c, mu);
  return CavityModeSpec(omega_c, kappa, G, mu, kx, volume_um3);
}

CouplingConstant coupling_g2(double density_cm3, double dipole_enm, double omega_mev,
                             double mu, double G) {
  if (!(density_cm3 > 0.0 && dipole_enm > 0.0 && omega_mev > 0.0 && mu > 0.0 &&
        G > 0.0))
    throw DomainError("coupling_g2: all inputs must be > 0");

  // Gaussian-units evaluation, then (rad/s)^2 -> meV^2.
  const double d_esu_cm = dipole_enm * units::e_nm_to_esu_cm;
  const double omega_rad = omega_mev * units::meV_to_rad_per_s;
  const double hbar_erg_s = units::hbar_J_s * 1e7;
  const double g2_rad2 = 2.0 * units::pi * omega_rad * d_esu_cm * d_esu_cm *
                         density_cm3 * G / (hbar_erg_s * mu * mu);
  const double g2_mev2 =
      g2_rad2 * units::rad_per_s_to_meV * units::rad_per_s_to_meV;
  return CouplingConstant{g2_mev2, density_cm3, dipole_enm, omega_mev, mu, G};
}

cplx mode_steady_field(cplx source, const CavityModeSpec& mode, double omega_mev) {
  return source / cplx{mode.kappa, mode.omega_c - omega_mev};
}

PhaseMatch phase_mismatch(double k1x, double k2x, double kx_ir,
                          double device_length_um) {
  PhaseMatch pm;
  pm.delta_k = kx_ir - (k2x - k1x);
  pm.matched = std::abs(pm.delta_k) * device_length_um < units::pi;
  return pm;
}

double manley_rowe_cap(double flux_ir, double flux_opt1, double flux_opt2,
                       bool* capped) {
  if (flux_ir < 0.0 || flux_opt1 < 0.0 || flux_opt2 < 0.0)
    throw DomainError("manley_rowe_cap: photon fluxes must be >= 0");
  const double bound = std::min(flux_opt1, flux_opt2);
  const bool binds = flux_ir > bound;
  if (capped) *capped = binds;
  return binds ? bound : flux_ir;
}

FixedPointOutcome fixed_point_ir(const PacketParams& prototype,
                                 const BroadeningSpec& broadening,
                                 const CavityModeSpec& mode, double g2_ir,
                                 double omega_ir_mev, const FixedPointOptions& opt,
                                 Exec exec) {
  if (!(opt.beta > 0.0 && opt.beta <= 1.0))
    throw ValidationError("fixed_point_ir: damping beta must be in (0, 1]");

  const QuadratureGrid grid =
      make_grid(broadening, dephasing_feature_scale(prototype.relaxation(), broadening));

  // One map application: ensemble-average s32 with the IR drive set, then
  // the Lorentzian mode response.
  auto map = [&](cplx e_ir) -> cplx {
    const NodeFn fn = [&prototype, &broadening, e_ir](double xi, cplx* out) {
      const PacketParams pp =
          prototype
              .with_shift(broadening.u21 * xi, broadening.u31 * xi, broadening.u32 * xi)
              .with_ir_drive(e_ir);
      out[0] = steady_state(pp).sigma32;
    };
    cplx mean{0.0, 0.0};
    const auto buf = evaluate_nodes(grid, 1, fn, exec);
    for (std::size_t i = 0; i < grid.xi.size(); ++i) mean += grid.weight[i] * buf[i];
    return mode_steady_field(cplx{0.0, 1.0} * g2_ir * mean, mode, omega_ir_mev);
  };

  // Damped iteration with a secant estimate of the complex map slope. The
  // raw map can be expansive when the medium's IR absorption exceeds the
  // bare cavity loss (g^2 |slope| > kappa); the slope-optimal mixing factor
  // keeps the relaxed iteration contractive whenever Re(slope) < 1. The
  // configured beta remains the upper bound on the mixing.
  FixedPointOutcome out;
  cplx e{0.0, 0.0};
  cplx e_prev{0.0, 0.0}, m_prev{0.0, 0.0};
  double prev_residual = std::numeric_limits<double>::infinity();
  int rising = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const cplx m = map(e);
    const double residual = std::abs(m - e);
    const double scale = std::max(std::abs(m), std::abs(e));
    out.iterations = it;
    out.last_residual = scale > 0.0 ? residual / scale : 0.0;
    if (residual <= opt.rtol * scale || scale == 0.0) {
      out.e = e;
      out.converged = true;
      return out;
    }

    double beta = opt.beta;
    if (it > 1 && std::abs(e - e_prev) > 0.0) {
      const cplx slope = (m - m_prev) / (e - e_prev);
      const cplx one_minus = 1.0 - slope;
      const double denom = std::norm(one_minus);
      if (denom > 1e-30) {
        const double best = one_minus.real() / denom;
        beta = std::clamp(best, 1e-4, opt.beta);
      }
    }

    rising = residual > prev_residual ? rising + 1 : 0;
    if (rising >= 8) {
      std::ostringstream os;
      os << "fixed_point_ir: oscillating residual (" << residual << " meV) after "
         << it << " iterations; retry with beta < " << opt.beta;
      throw NumericError(os.str(), out.last_residual, 0.5 * opt.beta);
    }
    prev_residual = residual;
    e_prev = e;
    m_prev = m;
    e += beta * (m - e);
  }
  std::ostringstream os;
  os << "fixed_point_ir: no convergence after " << opt.max_iter
     << " iterations (relative residual " << out.last_residual << ")";
  throw NumericError(os.str(), out.last_residual);
}

namespace {

double circulating_flux(double rabi_mev, const FieldReport& f) {
  if (rabi_mev == 0.0) return 0.0;
  const double field = units::field_V_per_cm(rabi_mev, f.dipole_enm);
  const double intensity = units::intensity_W_per_cm2(field, f.mu);
  return units::photon_flux_per_cm2_s(intensity, f.omega_mev);
}

}  // namespace

IRSolution self_consistent_ir(const PacketParams& prototype,
                              const BroadeningSpec& broadening,
                              const CavityModeSpec& mode, double g2_ir,
                              const FieldReport& ir, const FieldReport& opt1,
                              const FieldReport& opt2, const FixedPointOptions& opt,
                              Exec exec) {
  const FixedPointOutcome fp =
      fixed_point_ir(prototype, broadening, mode, g2_ir, ir.omega_mev, opt, exec);

  IRSolution sol;
  sol.e = fp.e;
  sol.converged = fp.converged;
  sol.iterations = fp.iterations;
  sol.last_residual = fp.last_residual;

  const double e_abs = std::abs(fp.e);
  const double field = e_abs > 0.0 ? units::field_V_per_cm(e_abs, ir.dipole_enm) : 0.0;
  sol.intensity_W_cm2 = e_abs > 0.0 ? units::intensity_W_per_cm2(field, ir.mu) : 0.0;
  const double raw_flux =
      e_abs > 0.0 ? units::photon_flux_per_cm2_s(sol.intensity_W_cm2, ir.omega_mev)
                  : 0.0;
  sol.flux_opt1 = circulating_flux(std::abs(prototype.e1()), opt1);
  sol.flux_opt2 = circulating_flux(std::abs(prototype.e2()), opt2);
  sol.photon_flux = manley_rowe_cap(raw_flux, sol.flux_opt1, sol.flux_opt2,
                                    &sol.cap_applied);

  const auto& r = prototype.relaxation();
  sol.weak_gate_ok = e_abs < std::min({r.gamma21, r.gamma31, r.gamma32});
  return sol;
}

double output_power_mw(const IRSolution& sol, double facet_area_um2,
                       double out_coupling, double omega_ir_mev) {
  if (!(facet_area_um2 >= 0.0) || !(out_coupling >= 0.0))
    throw DomainError("output_power_mw: geometry must be >= 0");
  const double area_cm2 = facet_area_um2 * 1e-8;
  const double photon_J = omega_ir_mev * 1e-3 * units::elementary_charge_C;
  const double watts = out_coupling * sol.photon_flux * area_cm2 * photon_J;
  return watts * 1e3;
}

}  // namespace triwave
