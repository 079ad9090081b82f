#pragma once

#include <functional>
#include <vector>

#include "triwave/liouville.hpp"
#include "triwave/types.hpp"

// Averaging of packet-level quantities over an inhomogeneously broadened
// ensemble. A single latent shift variable xi (dot size, k_parallel, ...)
// shifts every transition with its own scale: nu_ik = u_ik * xi.
//
// Quadrature: uniform trapezoid in a sinh-graded coordinate, so nodes
// cluster around xi = 0 where the integrands carry structure on the scale
// gamma/u (dephasing-narrow resonances, saturation holes) while the grid
// still spans [-cutoff, cutoff]. The grading strength is chosen from the
// packet scales; node results are reduced in fixed index order, so output
// is bit-reproducible for any thread count.

namespace triwave {

enum class BroadeningKind { homogeneous, gaussian, lorentzian };

struct BroadeningSpec {
  BroadeningKind kind = BroadeningKind::homogeneous;
  double u21 = 0.0, u31 = 0.0, u32 = 0.0;  // half-widths (meV)
  int nodes = 129;
  double cutoff = 5.0;  // in units of u

  BroadeningSpec() = default;
  BroadeningSpec(BroadeningKind k, double u21_, double u31_, double u32_,
                 int nodes_ = 129, double cutoff_ = 5.0);

  double max_u() const { return std::max({u21, u31, u32}); }
};

// Normalized density of the latent shift variable.
double distribution_weight(double xi, BroadeningKind kind);

enum class Exec { serial, parallel };

struct QuadratureGrid {
  std::vector<double> xi;
  std::vector<double> weight;   // includes the distribution density
  double grading = 0.0;         // sinh parameter actually used
};

// min_feature_xi: smallest xi-scale the integrand is expected to carry;
// the grid's central spacing is pushed below roughly a third of it.
QuadratureGrid make_grid(const BroadeningSpec& spec, double min_feature_xi);

// Smallest dephasing scale gamma_ik/u_ik over broadened transitions.
double dephasing_feature_scale(const RelaxationSpec& relax, const BroadeningSpec& spec);
// Saturation-hole scale min(|e1|,|e2|)/max(u); coarser than the above.
double hole_feature_scale(const BroadeningSpec& spec, cplx e1, cplx e2);

// Per-node functional: fills out[0..k-1] for the packet at shift xi.
using NodeFn = std::function<void(double xi, cplx* out)>;

// Evaluates the functional at every node (flat node-major buffer). A
// failure at any node is reported with that node's xi; when several nodes
// fail, the lowest index wins so the error is deterministic.
std::vector<cplx> evaluate_nodes(const QuadratureGrid& grid, int k, const NodeFn& fn,
                                 Exec exec);

// Weighted quadrature of the functional; `coarse` (optional) receives the
// half-resolution estimate used for the error measure.
struct AverageResult {
  std::vector<cplx> mean;
  double quad_error = 0.0;  // max over components of the fine/coarse rel. diff
  int nodes = 0;
};
AverageResult average_functional(const QuadratureGrid& grid, int k, const NodeFn& fn,
                                 Exec exec);

struct EnsembleResult {
  cplx sigma32_source;            // <s32> at zero IR field
  cplx ir_slope;                  // <d s32/d e>: IR gain/absorption part
  cplx path12, path13;            // <n12/(G21* Gt32)>, <n13/(G31 Gt32)>
  cplx sigma21_per_e1, sigma31_per_e2;
  double rho11 = 0.0, rho22 = 0.0, rho33 = 0.0;
  double node_max_n23 = 0.0, node_min_n23 = 0.0;
  double quad_error = 0.0;
  int nodes = 0;

  double n12() const { return rho11 - rho22; }
  double n13() const { return rho11 - rho33; }
  double n23() const { return rho22 - rho33; }
};

// Full packet solve (state + IR linear response) averaged over the
// ensemble; prototype must have e_ir = 0. Homogeneous kind reduces to the
// single packet at xi = 0 exactly.
EnsembleResult ensemble_average(const PacketParams& prototype,
                                const BroadeningSpec& spec, Exec exec = Exec::parallel);

// Same average in the spectral-hole-burning regime: validates the scale
// separations |e_drive| >= 10 gamma and u >= 10 |e_drive|, and (with
// refine = true) grades the grid down to the dephasing scale so the
// saturated holes are fully resolved.
EnsembleResult holeburning_average(const PacketParams& prototype,
                                   const BroadeningSpec& spec, bool refine = true,
                                   Exec exec = Exec::parallel);

// (min, max) of the 3<->2 population difference n23 = rho22 - rho33 over
// the quadrature nodes, with every packet solved at the given IR drive.
// n23 >= 0 everywhere certifies generation without IR-transition inversion.
std::pair<double, double> node_n23_extrema(const PacketParams& prototype,
                                           const BroadeningSpec& spec, cplx e_ir,
                                           Exec exec = Exec::parallel);

}  // namespace triwave
