#include "triwave/scenario.hpp"

#include <cmath>
#include <limits>

#include "triwave/analytic.hpp"
#include "triwave/errors.hpp"
#include "triwave/units.hpp"

namespace triwave {

namespace {

constexpr double qnan = std::numeric_limits<double>::quiet_NaN();

BroadeningKind kind_of(const std::string& s) {
  if (s == "homogeneous") return BroadeningKind::homogeneous;
  if (s == "gaussian") return BroadeningKind::gaussian;
  return BroadeningKind::lorentzian;
}

struct Assembled {
  LevelScheme levels;
  DipoleSet dipoles;
  RelaxationSpec relax;
  BroadeningSpec broadening;
  double omega1, omega2, omega;
  Detunings det;
  cplx e1, e2;
  double kappa_ir, kappa1, kappa2;
  double g2_ir, g2_opt1, g2_opt2;
  CavityModeSpec mode_ir;
  double k1x, k2x;
  FieldReport ir, opt1, opt2;
  analytic::AnalyticContext ctx;
  FixedPointOptions fp;
};

Assembled assemble(const ScenarioConfig& c) {
  const LevelScheme levels(c.real("levels.e1_mev"), c.real("levels.e2_mev"),
                           c.real("levels.e3_mev"));
  const DipoleSet dipoles(c.real("dipoles.d21_enm"), c.real("dipoles.d31_enm"),
                          c.real("dipoles.d32_enm"));
  const RelaxationSpec relax(c.real("relax.gamma21_mev"), c.real("relax.gamma31_mev"),
                             c.real("relax.gamma32_mev"), c.real("relax.r32_mev"),
                             c.real("relax.r31_mev"), c.real("relax.r21_mev"),
                             c.real("relax.pump_mev"));
  const BroadeningSpec broadening(
      kind_of(c.text("broadening.kind")), c.real("broadening.u21_mev"),
      c.real("broadening.u31_mev"), c.real("broadening.u32_mev"),
      static_cast<int>(c.integer("broadening.nodes")), c.real("broadening.cutoff"));

  const double omega1 = levels.omega21() + c.real("drives.delta1_mev");
  const double omega2 = levels.omega31() + c.real("drives.delta2_mev");
  const double omega = omega2 - omega1;
  if (!(omega > 0.0))
    throw ValidationError("scenario: drive detunings give a nonpositive beat frequency");
  const Detunings det = closed_loop_detunings(levels, omega1, omega2, omega);

  const cplx e1 = std::polar(c.real("drives.e1_mev"), c.real("drives.e1_phase_rad"));
  const cplx e2 = std::polar(c.real("drives.e2_mev"), c.real("drives.e2_phase_rad"));

  const double mu_ir = c.real("mode_ir.mu");
  const double mu1 = c.real("mode_opt1.mu");
  const double mu2 = c.real("mode_opt2.mu");
  const double kappa_ir = units::loss_cm_to_rate(c.real("mode_ir.loss_cm"), omega, mu_ir);
  const double kappa1 = units::loss_cm_to_rate(c.real("mode_opt1.loss_cm"), omega1, mu1);
  const double kappa2 = units::loss_cm_to_rate(c.real("mode_opt2.loss_cm"), omega2, mu2);

  const double density = c.real("medium.density_cm3");
  const double G_ir = c.real("mode_ir.confinement");
  const double G1 = c.real("mode_opt1.confinement");
  const double G2 = c.real("mode_opt2.confinement");

  Assembled a{levels,
              dipoles,
              relax,
              broadening,
              omega1,
              omega2,
              omega,
              det,
              e1,
              e2,
              kappa_ir,
              kappa1,
              kappa2,
              coupling_g2(density, dipoles.d32(), omega, mu_ir, G_ir).g2,
              coupling_g2(density, dipoles.d21(), omega1, mu1, G1).g2,
              coupling_g2(density, dipoles.d31(), omega2, mu2, G2).g2,
              CavityModeSpec::from_index(omega + c.real("mode_ir.detuning_mev"),
                                         kappa_ir, G_ir, mu_ir,
                                         c.real("mode_ir.volume_um3")),
              units::unit_table.wavenumber_per_um(omega1, mu1),
              units::unit_table.wavenumber_per_um(omega2, mu2),
              FieldReport{omega, dipoles.d32(), mu_ir},
              FieldReport{omega1, dipoles.d21(), mu1},
              FieldReport{omega2, dipoles.d31(), mu2},
              {},
              {}};

  a.ctx.omega = omega;
  a.ctx.omega1 = omega1;
  a.ctx.omega2 = omega2;
  a.ctx.d = dipoles.d32();
  a.ctx.d1 = dipoles.d21();
  a.ctx.d2 = dipoles.d31();
  a.ctx.kappa = kappa_ir;
  a.ctx.kappa1 = kappa1;
  a.ctx.kappa2 = kappa2;
  a.ctx.G = G_ir;
  a.ctx.G1 = G1;
  a.ctx.G2 = G2;
  a.ctx.gamma21 = relax.gamma21;
  a.ctx.gamma31 = relax.gamma31;
  a.ctx.gamma32 = relax.gamma32;
  a.ctx.u21 = broadening.u21;
  a.ctx.u31 = broadening.u31;
  a.ctx.u32 = broadening.u32;
  a.ctx.e1 = e1;
  a.ctx.e2 = e2;

  a.fp.beta = c.real("solver.beta");
  a.fp.max_iter = static_cast<int>(c.integer("solver.max_iter"));
  a.fp.rtol = c.real("solver.rtol");
  return a;
}

}  // namespace

Record run_scenario(const ScenarioConfig& cfg, Exec exec) {
  const Assembled a = assemble(cfg);
  const PacketParams prototype(a.det, a.relax, a.e1, a.e2, 0.0);

  Record r;
  r.eta_1 = a.ctx.eta1();
  r.eta_2 = a.ctx.eta2();

  const EnsembleResult ens = ensemble_average(prototype, a.broadening, exec);

  const auto weak = analytic::weak_ir_field(a.ctx, a.g2_ir, ens.path12, ens.path13);
  r.ir_weak_mev = std::abs(weak.value);
  r.ir_weak_gate = weak.within_validity;

  const auto homog = analytic::ir_field_homogeneous(a.ctx);
  r.ir_homog_mev = homog.value;
  r.ir_homog_gate = homog.within_validity &&
                    a.broadening.kind == BroadeningKind::homogeneous &&
                    a.det.d21 == 0.0 && a.det.d31 == 0.0;

  try {
    const auto inhom = analytic::ir_field_inhomogeneous(a.ctx);
    r.ir_inhomog_mev = inhom.e_abs;
    r.ir_inhomog_intensity_ratio = inhom.intensity_ratio;
    r.ir_inhomog_gate = inhom.within_validity;
  } catch (const Error&) {
    r.ir_inhomog_mev = qnan;
    r.ir_inhomog_intensity_ratio = qnan;
    r.ir_inhomog_gate = false;
  }

  try {
    r.ir_holeburn_mev = analytic::ir_field_holeburning(a.ctx, a.relax);
    r.ir_holeburn_gate = true;
  } catch (const Error&) {
    r.ir_holeburn_mev = qnan;
    r.ir_holeburn_gate = false;
  }

  const IRSolution sol = self_consistent_ir(prototype, a.broadening, a.mode_ir,
                                            a.g2_ir, a.ir, a.opt1, a.opt2, a.fp, exec);
  r.e_abs_mev = std::abs(sol.e);
  r.e_re_mev = sol.e.real();
  r.e_im_mev = sol.e.imag();
  r.intensity_w_cm2 = sol.intensity_W_cm2;
  r.photon_flux_cm2s = sol.photon_flux;
  r.flux_opt1_cm2s = sol.flux_opt1;
  r.flux_opt2_cm2s = sol.flux_opt2;
  r.cap_applied = sol.cap_applied;
  r.converged = sol.converged;
  r.iterations = sol.iterations;
  r.weak_gate = sol.weak_gate_ok;

  const auto [n23_lo, n23_hi] = node_n23_extrema(prototype, a.broadening, sol.e, exec);
  r.n23_node_min = n23_lo;
  r.n23_node_max = n23_hi;

  const auto pm = phase_mismatch(a.k1x, a.k2x, a.mode_ir.kx,
                                 cfg.real("geometry.length_um"));
  r.delta_k_per_um = pm.delta_k;
  r.phase_matched = pm.matched;

  r.power_mw = output_power_mw(sol, cfg.real("geometry.facet_area_um2"),
                               cfg.real("geometry.out_coupling"), a.omega);
  return r;
}

Table run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep, Exec exec) {
  Table t;
  t.swept_key = sweep.param;
  t.swept_values = sweep_values(cfg, sweep);
  t.rows.reserve(t.swept_values.size());
  for (const double v : t.swept_values) {
    ScenarioConfig step = cfg;
    step.set_real(sweep.param, v);
    t.rows.push_back(run_scenario(step, exec));
  }
  return t;
}

const std::vector<ColumnDef>& record_columns() {
  static const std::vector<ColumnDef> cols = {
      {"e_abs_mev", ColumnType::real, [](const Record& r) { return r.e_abs_mev; }},
      {"e_re_mev", ColumnType::real, [](const Record& r) { return r.e_re_mev; }},
      {"e_im_mev", ColumnType::real, [](const Record& r) { return r.e_im_mev; }},
      {"intensity_w_cm2", ColumnType::real,
       [](const Record& r) { return r.intensity_w_cm2; }},
      {"photon_flux_cm2s", ColumnType::real,
       [](const Record& r) { return r.photon_flux_cm2s; }},
      {"flux_opt1_cm2s", ColumnType::real,
       [](const Record& r) { return r.flux_opt1_cm2s; }},
      {"flux_opt2_cm2s", ColumnType::real,
       [](const Record& r) { return r.flux_opt2_cm2s; }},
      {"cap_applied", ColumnType::flag,
       [](const Record& r) { return r.cap_applied ? 1.0 : 0.0; }},
      {"converged", ColumnType::flag,
       [](const Record& r) { return r.converged ? 1.0 : 0.0; }},
      {"iterations", ColumnType::integer,
       [](const Record& r) { return static_cast<double>(r.iterations); }},
      {"weak_gate", ColumnType::flag,
       [](const Record& r) { return r.weak_gate ? 1.0 : 0.0; }},
      {"n23_node_min", ColumnType::real,
       [](const Record& r) { return r.n23_node_min; }},
      {"n23_node_max", ColumnType::real,
       [](const Record& r) { return r.n23_node_max; }},
      {"eta_1", ColumnType::real, [](const Record& r) { return r.eta_1; }},
      {"eta_2", ColumnType::real, [](const Record& r) { return r.eta_2; }},
      {"ir_weak_mev", ColumnType::real, [](const Record& r) { return r.ir_weak_mev; }},
      {"ir_weak_gate", ColumnType::flag,
       [](const Record& r) { return r.ir_weak_gate ? 1.0 : 0.0; }},
      {"ir_homog_mev", ColumnType::real,
       [](const Record& r) { return r.ir_homog_mev; }},
      {"ir_homog_gate", ColumnType::flag,
       [](const Record& r) { return r.ir_homog_gate ? 1.0 : 0.0; }},
      {"ir_inhomog_mev", ColumnType::real,
       [](const Record& r) { return r.ir_inhomog_mev; }},
      {"ir_inhomog_intensity_ratio", ColumnType::real,
       [](const Record& r) { return r.ir_inhomog_intensity_ratio; }},
      {"ir_inhomog_gate", ColumnType::flag,
       [](const Record& r) { return r.ir_inhomog_gate ? 1.0 : 0.0; }},
      {"ir_holeburn_mev", ColumnType::real,
       [](const Record& r) { return r.ir_holeburn_mev; }},
      {"ir_holeburn_gate", ColumnType::flag,
       [](const Record& r) { return r.ir_holeburn_gate ? 1.0 : 0.0; }},
      {"delta_k_per_um", ColumnType::real,
       [](const Record& r) { return r.delta_k_per_um; }},
      {"phase_matched", ColumnType::flag,
       [](const Record& r) { return r.phase_matched ? 1.0 : 0.0; }},
      {"power_mw", ColumnType::real, [](const Record& r) { return r.power_mw; }},
  };
  return cols;
}

}  // namespace triwave
