#pragma once

#include <complex>
#include <vector>

namespace adiabatic {

using ComplexState = std::vector<std::complex<double>>;

struct EvolutionResult {
  ComplexState final_state;  // Dicke amplitudes, k = m + n/2
  double fidelity = 0.0;     // |<0...0|psi(T)>|^2
  double norm_drift = 0.0;   // | |psi(T)| - 1 |
  double total_time = 0.0;
  int steps = 0;
};

/// Fixed-step propagation from |=>> under H(t/T) with s linear in t. Each step is a
/// fourth-order commutator-free pair of exact tridiagonal exponentials, so it is unitary
/// to rounding.
EvolutionResult evolve_fixed(int n, double alpha, double total_time, int steps);

struct EvolveOptions {
  double fidelity_tolerance = 1e-6;  // max fidelity change when the step is halved
  int max_steps = 1 << 22;
};

/// Starts at `steps` (raised to a floor proportional to T) and doubles until halving the
/// step changes the fidelity by less than the tolerance. Throws std::runtime_error when
/// max_steps is reached first.
EvolutionResult evolve(int n, double alpha, double total_time, int steps = 16, const EvolveOptions& opts = {});

struct RequiredTime {
  int n = 0;
  double t_star = 0.0;         // smallest bracketed time reaching the target fidelity
  double inverse_gap_sq = 0.0; // Delta_min^-2 from the spectral module
  double gap_min = 0.0;
};

struct RequiredTimeOptions {
  double relative_tolerance = 1e-4;
  double t_max = 1e7;
  unsigned workers = 1;
};

/// For each n, bisects T on the fidelity target. Throws std::runtime_error naming the
/// bracket when the target is not reached below t_max.
std::vector<RequiredTime> required_time_scan(const std::vector<int>& n_list, double alpha, double fidelity_target,
                                             const RequiredTimeOptions& opts = {});

}  // namespace adiabatic
