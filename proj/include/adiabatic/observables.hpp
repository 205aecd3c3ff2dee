#pragma once

#include <vector>

#include "adiabatic/model.hpp"

namespace adiabatic {

// Spin moments of a maximal-spin state. All of them reject states whose norm is off by more than 1e-8.
double expect_sx(const SymmetricState& psi);
double expect_sz(const SymmetricState& psi);
double expect_sx2(const SymmetricState& psi);
double expect_sz2(const SymmetricState& psi);
/// <S_y^2> from S_y^2 = (S^2 - S_z^2)/2 - (S_+^2 + S_-^2)/4.
double expect_sy2(const SymmetricState& psi);

/// C_R = 1 - 4 <S_y^2> / n. Reported raw; it can be negative where the closed form does not apply.
double rescaled_concurrence(const SymmetricState& psi);

inline constexpr int kWoottersMaxQubits = 12;

/// (n-1) times the Wootters concurrence of the two-qubit reduced density matrix,
/// computed from the explicit 2^n state.
double wootters_oracle(const SymmetricState& psi);

struct StateAnatomy {
  double overlap_x = 0.0;  // |<=>|psi>|^2
  double overlap_z = 0.0;  // |<0...0|psi>|^2
  std::vector<double> dicke_weights;
};

StateAnatomy anatomy(const SymmetricState& psi);

/// Weights |<n/2, m|_x psi>|^2 on the S_x eigenbasis, ordered from m_x = n/2 downwards
/// (index 0 is |=>>, index 1 the one-flip state |n/2, n/2-1>_x, ...).
std::vector<double> x_dicke_weights(const SymmetricState& psi);

/// Discontinuity of the ground-state C_R along the path at fixed n. s_star is where the
/// ground-state <S_z> rises most steeply (located by bisection on the midpoint value);
/// left/right are linear extrapolations to s_star from s_star -/+ {delta, 2 delta}, which
/// steps over the finite-size rounding of a first-order jump.
struct ConcurrenceJump {
  double s_star = 0.0;
  double left = 0.0;
  double right = 0.0;
  double jump = 0.0;  // |right - left|
};
ConcurrenceJump concurrence_jump(int n, double alpha, double delta = 2e-3, int coarse_points = 201);

/// Three-point Richardson extrapolation assuming f(n) = f_inf + a/n + b/n^2.
double richardson_inverse_n(const std::vector<int>& n, const std::vector<double>& values);

}  // namespace adiabatic
