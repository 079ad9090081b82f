#pragma once

#include <array>
#include <complex>

#include "triwave/types.hpp"

// Steady state of one homogeneous packet of the three-level medium under up
// to three coherent fields, in the rotating frame at the three-photon
// resonance (omega_ir = omega2 - omega1).
//
// Convention (pinned; the perturbative limit reproduces the weak-field
// closed form of the generated 3<->2 amplitude term by term):
//   rho21 = s21 exp(-i omega1 t), rho31 = s31 exp(-i omega2 t),
//   rho32 = s32 exp(-i omega_ir t),
//   Gamma_ik = gamma_ik + i*Delta_ik with Delta21 = omega21 - omega1,
//   Delta31 = omega31 - omega2, Delta32 = omega32 - omega_ir.
// Master equations (hbar = 1), with n_ik = rho_ii - rho_kk:
//   d s21/dt = -Gamma21 s21 + i e1 n12 + i (e* s31 - e2 s32*)
//   d s31/dt = -Gamma31 s31 + i e2 n13 + i (e  s21 - e1 s32)
//   d s32/dt = -Gamma32 s32 + i e  n23 + i (e2 s21* - e1* s31)
//   d rho22/dt = r32 rho33 - r21 rho22 + 2 Im(e1* s21) - 2 Im(e* s32)
//   d rho33/dt = pump rho11 - (r31 + r32) rho33 + 2 Im(e2* s31) + 2 Im(e* s32)
// rho11 is eliminated by the trace, which replaces its rate equation.

namespace triwave {

class PacketParams {
 public:
  // Central (loop-closed) detunings. Rejects gamma_ik = 0 on any transition
  // that carries a field, and detunings that break the loop identity.
  PacketParams(const Detunings& det, const RelaxationSpec& relax, cplx e1,
               cplx e2, cplx e_ir);

  // Correlated inhomogeneous shifts scale each transition independently
  // (nu_ik = u_ik * xi), which need not close the loop when u31 != u21 + u32;
  // this factory skips the loop-identity check for such packets.
  static PacketParams with_free_detunings(const Detunings& det,
                                          const RelaxationSpec& relax, cplx e1,
                                          cplx e2, cplx e_ir);

  const Detunings& detunings() const { return det_; }
  const RelaxationSpec& relaxation() const { return relax_; }
  cplx e1() const { return e1_; }
  cplx e2() const { return e2_; }
  cplx e_ir() const { return e_ir_; }

  PacketParams with_ir_drive(cplx e_ir) const {
    return with_free_detunings(det_, relax_, e1_, e2_, e_ir);
  }
  PacketParams with_shift(double nu21, double nu31, double nu32) const {
    Detunings d{det_.d21 + nu21, det_.d31 + nu31, det_.d32 + nu32};
    return with_free_detunings(d, relax_, e1_, e2_, e_ir_);
  }

 private:
  PacketParams() = default;
  Detunings det_;
  RelaxationSpec relax_;
  cplx e1_, e2_, e_ir_;
};

struct PacketState {
  double rho11 = 0.0, rho22 = 0.0, rho33 = 0.0;
  cplx sigma21, sigma31, sigma32;
  double residual = 0.0;       // max-norm of the time derivative at the solution
  bool positivity_ok = true;   // 0 <= rho_ii <= 1 diagnostic, not an error

  double n12() const { return rho11 - rho22; }
  double n13() const { return rho11 - rho33; }
  double n23() const { return rho22 - rho33; }
  double trace() const { return rho11 + rho22 + rho33; }
};

// Unknown ordering of the linear system.
enum StateIndex : int {
  idx_rho22 = 0,
  idx_rho33 = 1,
  idx_s21 = 2,
  idx_s31 = 3,
  idx_s32 = 4,
  idx_c21 = 5,  // conj(s21)
  idx_c31 = 6,
  idx_c32 = 7,
};

// dx/dt = matrix * x + rhs over {rho22, rho33, s21, s31, s32, s21*, s31*, s32*}.
struct SteadySystem {
  std::array<cplx, 64> matrix{};
  std::array<cplx, 8> rhs{};
};

SteadySystem build_steady_system(const PacketParams& p);

// Derivative of the system matrix along a real change of the IR drive,
// used for the exact linear response below.
std::array<cplx, 64> ir_drive_matrix_derivative(const PacketParams& p);

PacketState steady_state(const PacketParams& p);

// Linear response of s32 to a weak IR probe around the two-drive steady
// state (requires e_ir == 0):
//   s32(e) = source + slope * e + O(e^2)      (e along the real direction)
// `source` is the parametric beat polarization driven by e1* e2; `slope`
// carries the IR-transition gain/absorption seen by the probe.
struct IrLinearResponse {
  cplx source;
  cplx slope;
};

IrLinearResponse ir_linear_response(const PacketParams& p);

// State and probe response from a single factorization (requires e_ir == 0).
struct PacketSolve {
  PacketState state;
  IrLinearResponse response;
};

PacketSolve steady_state_with_response(const PacketParams& p);

}  // namespace triwave
