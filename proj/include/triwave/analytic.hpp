#pragma once

#include <utility>

#include "triwave/types.hpp"

// Closed-form evaluators for the asymptotic regimes of intracavity
// difference-frequency generation: the dressed linewidth factors, the
// weak-IR parametric field, its homogeneous / inhomogeneous / hole-burning
// limits, the down-conversion efficiency parameter eta, and the drive
// saturation scale. All functions are pure and thread-safe.

namespace triwave::analytic {

using triwave::cplx;

// Loss rates may be quoted either as internal decay rates (meV) or as
// intensity losses (cm^-1); ratios require like units.
enum class LossUnit { mev, per_cm };
struct LossRate {
  double value;
  LossUnit unit;
};

struct AnalyticContext {
  double omega = 0.0, omega1 = 0.0, omega2 = 0.0;   // field frequencies (meV)
  double d = 0.0, d1 = 0.0, d2 = 0.0;               // dipoles (e*nm)
  double kappa = 0.0, kappa1 = 0.0, kappa2 = 0.0;   // cavity decay rates (meV)
  double G = 0.0, G1 = 0.0, G2 = 0.0;               // confinement factors
  double gamma21 = 0.0, gamma31 = 0.0, gamma32 = 0.0;
  double u21 = 0.0, u31 = 0.0, u32 = 0.0;           // inhomogeneous widths (meV)
  cplx e1, e2;                                       // drive Rabi amplitudes (meV)

  void validate() const;  // loop closure, positivity
  double eta1() const { return (kappa1 * G) / (G1 * kappa); }
  double eta2() const { return (kappa2 * G) / (G2 * kappa); }
};

struct GammaFactors {
  cplx g21, g31, g32;
  cplx g32_dressed;  // g32 + |e1|^2/g31 + |e2|^2/conj(g21)
};

// Literal evaluation at packet shift nu_ik added onto the central detunings.
GammaFactors complex_linewidths(const RelaxationSpec& relax, const Detunings& det,
                                cplx e1, cplx e2);

template <class T>
struct Flagged {
  T value{};
  bool within_validity = true;
};

// Weak-IR parametric amplitude from supplied ensemble sums
// S12 = <n12/(G21* Gt32)>, S13 = <n13/(G31 Gt32)>:
//   e = i g^2 e1* e2 (S12 + S13) / kappa.
// The validity flag reports |e| < min gamma_ik; it never refuses.
Flagged<cplx> weak_ir_field(const AnalyticContext& ctx, double g2_ir, cplx path12,
                            cplx path13);

// Same with a single homogeneous packet at given populations and detunings.
Flagged<cplx> weak_ir_field_homogeneous(const AnalyticContext& ctx, double g2_ir,
                                        double n12, double n13, const Detunings& det);

// Homogeneous-broadening magnitude with gain-clamped drives at line center:
//   |e| = (|e1||e2|/gamma32) [ (w/w1)(d^2/d1^2) eta1 + (w/w2)(d^2/d2^2) eta2 ].
Flagged<double> ir_field_homogeneous(const AnalyticContext& ctx);

// Down-conversion efficiency eta = (kappa_opt/G_opt) * (G_ir/kappa_ir).
// Mixed loss units are a contract error.
double eta_parameter(LossRate kappa_opt, double g_opt, LossRate kappa_ir, double g_ir);

// Unsaturated inhomogeneous limit (u >> gamma, |e_drive|; line centers):
//   |e| = [2|e1||e2|/(gamma32+gamma21)] (u21/u32)(w/w1)(d^2/d1^2) eta1.
// intensity_ratio = |E_ir|^2/|E_1|^2 is derived from the amplitude, so the
// two forms are consistent by construction.
struct InhomogeneousIr {
  double e_abs = 0.0;           // meV
  double intensity_ratio = 0.0;
  bool within_validity = true;
};
InhomogeneousIr ir_field_inhomogeneous(const AnalyticContext& ctx);

// Hole-burning limit under its structural assumptions (|e1| = |e2|, all
// gamma_ik and population rates equal, u21 = u31 = u >> |e1| >> gamma):
//   |e| = (|e1||e2| u/(gamma u32)) |0.9 A1 - 0.1 A2|,
// with A_i the per-drive bracket factors. Violated assumptions are a
// contract error listing every violation.
double ir_field_holeburning(const AnalyticContext& ctx, const RelaxationSpec& relax);

// Saturation intensity scale |E2|_s^2 = (hbar gamma32/d2)^2, returned in
// (V/cm)^2; at |E2|^2 = |E2|_s^2 the 3<->1 drive's Rabi amplitude equals
// gamma32/2 in the e = dE/(2 hbar) convention.
double saturation_field_sq(double gamma32, double d2);

// Gain-clamp bridge: at steady two-color lasing each optical field's
// saturated modal gain equals its loss, which pins the population
// combinations g1^2 n12 = -kappa1 gamma21 and g2^2 n13 = -kappa2 gamma31
// (homogeneous line centers). Returns (n12, n13), both negative.
std::pair<double, double> gain_clamped_populations(double kappa1, double gamma21,
                                                   double g1_sq, double kappa2,
                                                   double gamma31, double g2_sq);

}  // namespace triwave::analytic
