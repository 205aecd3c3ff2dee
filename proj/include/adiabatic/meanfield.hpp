#pragma once

#include <vector>

namespace adiabatic {

/// Product-state energy per the ansatz prod_i (cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>),
/// in the n -> infinity limit of the problem-Hamiltonian expectation.
double mf_energy(double theta, double phi, double s, double alpha);
/// d mf_energy / d theta at phi = 0.
double mf_energy_dtheta(double theta, double s, double alpha);
/// Exact expectation of H(s) in the n-qubit product state.
double mf_energy_finite(double theta, double phi, double s, double alpha, int n);

struct MeanFieldSolution {
  double theta = 0.0;
  double phi = 0.0;
  double energy = 0.0;
  bool degenerate = false;
  // Competing minimum, meaningful when degenerate is set.
  double other_theta = 0.0;
  double other_energy = 0.0;
};

struct MeanFieldOptions {
  int grid = 2001;
  double refine_tolerance = 1e-13;
  double degeneracy_energy = 1e-10;
  double min_separation = 1e-3;
};

/// Global minimum over theta with phi = 0 (the energy depends on phi only via -cos phi).
MeanFieldSolution mf_minimize(double s, double alpha, const MeanFieldOptions& opts = {});

/// <s_x> = <S_x>/n = sin(theta*) cos(phi*) / 2 on an alpha x s grid (rows: alpha).
std::vector<std::vector<double>> sx_surface(const std::vector<double>& alpha_grid, const std::vector<double>& s_grid,
                                            unsigned workers = 1);

enum class TransitionOrder { none, first, second };
const char* to_string(TransitionOrder o);

struct TransitionPoint {
  double alpha = 0.0;
  double s_c = 0.0;
  TransitionOrder order = TransitionOrder::none;
  double sx_jump = 0.0;
  double theta_jump = 0.0;
};

inline constexpr double kSxJumpThreshold = 1e-4;

/// Locates the steepest change of theta*(s) and refines it by bisection down to s_resolution.
/// First order when <s_x> jumps by more than kSxJumpThreshold between two separated minima;
/// second order within numerical resolution of the critical endpoint.
TransitionPoint transition_line(double alpha, double s_resolution = 1e-12);

struct CriticalPoint {
  double alpha_c = 0.0;
  double s_c = 0.0;
};

/// Bisection in alpha on the first-order flag.
CriticalPoint critical_point(double tolerance = 1e-9);

/// Closed-form candidates for the endpoint s-coordinate under the two readings of
/// 2/(2 + 3 sqrt6 e^{3/2} sinh(3 sqrt3/2)^{-1}): reciprocal of sinh, or inverse sinh.
struct EndpointReadings {
  double reciprocal_sinh = 0.0;
  double inverse_sinh = 0.0;
};
EndpointReadings endpoint_readings();

}  // namespace adiabatic
