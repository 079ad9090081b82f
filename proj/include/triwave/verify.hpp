#pragma once

#include <string>
#include <vector>

#include "triwave/ensemble.hpp"

// Built-in oracle suite: cross-checks the closed-form evaluators against
// the density-matrix solver and the ensemble quadrature. Each check uses
// fixed seeds, so the verdicts are deterministic.

namespace triwave::verify {

// Weak-IR closed form vs the packet solver (perturbative route) and the
// full self-consistent solver, over randomized homogeneous scenarios whose
// couplings are scaled into the weak-IR, parametric-dominance gate.
struct WeakFieldAgreement {
  double max_rel_err_perturbative = 0.0;  // expected < 1e-6
  double max_rel_err_self_consistent = 0.0;  // expected < 1e-2
  int sets = 0;
};
WeakFieldAgreement weak_field_agreement(int sets = 50, unsigned seed = 1);

// Homogeneous magnitude form vs the general form with gain-clamped
// populations, randomized clamped scenarios. Expected within 5%.
double gain_clamp_max_rel_err(int sets = 20, unsigned seed = 2);

// Unsaturated inhomogeneous closed form vs the ensemble quadrature at a
// given u/gamma; the relative error shrinks as u/gamma grows.
double inhomogeneous_rel_err(double u_over_gamma, int nodes = 2049);

// Hole-burning bracket coefficients recovered from the quadrature, in the
// normalization of the saturated gain clamps. Expected near (0.9, 0.1)
// with opposite signs between the two pathways.
struct HoleburningCoefficients {
  double c12 = 0.0;
  double c13 = 0.0;
  bool opposite_signs = false;
};
HoleburningCoefficients holeburning_coefficients(int nodes = 8193,
                                                 Exec exec = Exec::parallel);

struct CheckLine {
  std::string name;
  std::string detail;
  bool pass = false;
};

// The full suite with pass/fail verdicts at the shipped tolerances.
std::vector<CheckLine> run_all(Exec exec = Exec::parallel);

}  // namespace triwave::verify
