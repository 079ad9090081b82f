#include "triwave/analytic.hpp"

#include <cmath>
#include <sstream>

#include "triwave/errors.hpp"
#include "triwave/units.hpp"

namespace triwave::analytic {

void AnalyticContext::validate() const {
  if (std::abs(omega - (omega2 - omega1)) > 1e-9 * std::max(1.0, omega2))
    throw ValidationError("AnalyticContext: loop closure omega = omega2 - omega1");
  if (!(omega > 0.0 && omega1 > 0.0 && omega2 > 0.0))
    throw ValidationError("AnalyticContext: frequencies must be > 0");
  if (!(d > 0.0 && d1 > 0.0 && d2 > 0.0))
    throw ValidationError("AnalyticContext: dipoles must be > 0");
  if (!(kappa > 0.0 && kappa1 > 0.0 && kappa2 > 0.0))
    throw ValidationError("AnalyticContext: cavity decay rates must be > 0");
  for (double g : {G, G1, G2})
    if (!(g > 0.0 && g <= 1.0))
      throw ValidationError("AnalyticContext: confinement factors must be in (0, 1]");
  if (!(gamma21 > 0.0 && gamma31 > 0.0 && gamma32 > 0.0))
    throw ValidationError("AnalyticContext: coherence decay rates must be > 0");
}

GammaFactors complex_linewidths(const RelaxationSpec& relax, const Detunings& det,
                                cplx e1, cplx e2) {
  GammaFactors f;
  f.g21 = cplx{relax.gamma21, det.d21};
  f.g31 = cplx{relax.gamma31, det.d31};
  f.g32 = cplx{relax.gamma32, det.d32};
  f.g32_dressed = f.g32;
  if (e1 != 0.0) f.g32_dressed += std::norm(e1) / f.g31;
  if (e2 != 0.0) f.g32_dressed += std::norm(e2) / std::conj(f.g21);
  return f;
}

namespace {

bool weak_gate(const AnalyticContext& ctx, double e_abs) {
  return e_abs < std::min({ctx.gamma21, ctx.gamma31, ctx.gamma32});
}

double bracket1(const AnalyticContext& ctx) {
  return (ctx.omega / ctx.omega1) * (ctx.d * ctx.d) / (ctx.d1 * ctx.d1) * ctx.eta1();
}
double bracket2(const AnalyticContext& ctx) {
  return (ctx.omega / ctx.omega2) * (ctx.d * ctx.d) / (ctx.d2 * ctx.d2) * ctx.eta2();
}

}  // namespace

Flagged<cplx> weak_ir_field(const AnalyticContext& ctx, double g2_ir, cplx path12,
                            cplx path13) {
  const cplx e = cplx{0.0, 1.0} * g2_ir * std::conj(ctx.e1) * ctx.e2 *
                 (path12 + path13) / ctx.kappa;
  return {e, weak_gate(ctx, std::abs(e))};
}

Flagged<cplx> weak_ir_field_homogeneous(const AnalyticContext& ctx, double g2_ir,
                                        double n12, double n13, const Detunings& det) {
  RelaxationSpec relax;
  relax.gamma21 = ctx.gamma21;
  relax.gamma31 = ctx.gamma31;
  relax.gamma32 = ctx.gamma32;
  const GammaFactors f = complex_linewidths(relax, det, ctx.e1, ctx.e2);
  const cplx path12 = n12 / (std::conj(f.g21) * f.g32_dressed);
  const cplx path13 = n13 / (f.g31 * f.g32_dressed);
  return weak_ir_field(ctx, g2_ir, path12, path13);
}

Flagged<double> ir_field_homogeneous(const AnalyticContext& ctx) {
  ctx.validate();
  const double e_abs = std::abs(ctx.e1) * std::abs(ctx.e2) / ctx.gamma32 *
                       (bracket1(ctx) + bracket2(ctx));
  return {e_abs, weak_gate(ctx, e_abs)};
}

double eta_parameter(LossRate kappa_opt, double g_opt, LossRate kappa_ir, double g_ir) {
  if (kappa_opt.unit != kappa_ir.unit)
    throw ContractError("eta_parameter: both losses must use the same unit");
  if (!(kappa_opt.value > 0.0 && kappa_ir.value > 0.0))
    throw DomainError("eta_parameter: losses must be > 0");
  if (!(g_opt > 0.0)) throw DomainError("eta_parameter: optical confinement must be > 0");
  if (g_ir < 0.0) throw DomainError("eta_parameter: IR confinement must be >= 0");
  // Single division; identical numerator/denominator products cancel exactly.
  return (kappa_opt.value * g_ir) / (g_opt * kappa_ir.value);
}

InhomogeneousIr ir_field_inhomogeneous(const AnalyticContext& ctx) {
  ctx.validate();
  if (!(ctx.u21 > 0.0 && ctx.u32 > 0.0))
    throw ContractError("ir_field_inhomogeneous: needs u21 > 0 and u32 > 0");

  InhomogeneousIr out;
  out.e_abs = 2.0 * std::abs(ctx.e1) * std::abs(ctx.e2) / (ctx.gamma32 + ctx.gamma21) *
              (ctx.u21 / ctx.u32) * (ctx.omega / ctx.omega1) * (ctx.d * ctx.d) /
              (ctx.d1 * ctx.d1) * ctx.eta1();

  // |E|^2/|E1|^2 from the amplitude: E = 2 hbar e/d, so the ratio is
  // (|e| d1 / (|e1| d))^2; consistent with the amplitude by construction.
  const double a1 = std::abs(ctx.e1);
  out.intensity_ratio =
      a1 > 0.0 ? std::pow(out.e_abs * ctx.d1 / (a1 * ctx.d), 2) : 0.0;

  const double gmax = std::max({ctx.gamma21, ctx.gamma31, ctx.gamma32});
  const double dmax = std::max(std::abs(ctx.e1), std::abs(ctx.e2));
  double umin = std::numeric_limits<double>::infinity();
  for (double u : {ctx.u21, ctx.u31, ctx.u32})
    if (u > 0.0) umin = std::min(umin, u);
  out.within_validity = umin >= 10.0 * gmax && umin >= 10.0 * dmax;
  return out;
}

double ir_field_holeburning(const AnalyticContext& ctx, const RelaxationSpec& relax) {
  ctx.validate();
  std::ostringstream viol;
  const double a1 = std::abs(ctx.e1), a2 = std::abs(ctx.e2);
  if (std::abs(a1 - a2) > 1e-9 * std::max(a1, a2))
    viol << " |e1| != |e2|;";
  const double g = relax.gamma21;
  auto equal_rate = [g](double v) { return std::abs(v - g) <= 1e-9 * std::max(g, v); };
  if (!(equal_rate(relax.gamma31) && equal_rate(relax.gamma32)))
    viol << " unequal gamma_ik;";
  if (!(equal_rate(relax.r21) && equal_rate(relax.r31) && equal_rate(relax.r32)))
    viol << " unequal population rates;";
  if (std::abs(ctx.u21 - ctx.u31) > 1e-9 * std::max(ctx.u21, ctx.u31))
    viol << " u21 != u31;";
  if (!(ctx.u32 > 0.0)) viol << " u32 must be > 0;";
  if (!(ctx.u21 >= 10.0 * a1)) viol << " u < 10 |e1|;";
  if (!(a1 >= 10.0 * g)) viol << " |e1| < 10 gamma;";
  if (!viol.str().empty())
    throw ContractError("ir_field_holeburning: assumptions violated:" + viol.str());

  const double u = ctx.u21;
  return (a1 * a2 * u) / (g * ctx.u32) *
         std::abs(0.9 * bracket1(ctx) - 0.1 * bracket2(ctx));
}

double saturation_field_sq(double gamma32, double d2) {
  if (!(gamma32 > 0.0 && d2 > 0.0))
    throw DomainError("saturation_field_sq: inputs must be > 0");
  const double e_sat_V_cm = gamma32 / d2 * 1e4;  // 1 meV/(e*nm) = 1e4 V/cm
  return e_sat_V_cm * e_sat_V_cm;
}

std::pair<double, double> gain_clamped_populations(double kappa1, double gamma21,
                                                   double g1_sq, double kappa2,
                                                   double gamma31, double g2_sq) {
  if (!(g1_sq > 0.0 && g2_sq > 0.0))
    throw DomainError("gain_clamped_populations: couplings must be > 0");
  return {-kappa1 * gamma21 / g1_sq, -kappa2 * gamma31 / g2_sq};
}

}  // namespace triwave::analytic
