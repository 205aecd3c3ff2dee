#include "adiabatic/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "adiabatic/eigensolver.hpp"
#include "adiabatic/model.hpp"
#include "adiabatic/parallel.hpp"
#include "adiabatic/spectral.hpp"

namespace adiabatic {

namespace {

// exp(-i dt G) psi for a real symmetric tridiagonal G, via its eigendecomposition.
void apply_exponential(const TridiagonalOperator& g, double dt, ComplexState& psi) {
  const EigenResult eig = eigen_all(g, true);
  const std::size_t d = psi.size();
  ComplexState coeff(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::complex<double> c = 0.0;
    const auto& v = eig.vectors[i];
    for (std::size_t k = 0; k < d; ++k) c += v[k] * psi[k];
    coeff[i] = c * std::exp(std::complex<double>(0.0, -eig.values[i] * dt));
  }
  for (std::size_t k = 0; k < d; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) acc += eig.vectors[i][k] * coeff[i];
    psi[k] = acc;
  }
}

TridiagonalOperator weighted_generator(const TridiagonalOperator& h0, const TridiagonalOperator& hp, double weight,
                                       double s_eff) {
  // weight * H0 + s_eff * (HP - H0); HP is diagonal.
  TridiagonalOperator g;
  g.diag.resize(h0.dim());
  g.offdiag.resize(h0.offdiag.size());
  for (std::size_t k = 0; k < h0.dim(); ++k) g.diag[k] = weight * h0.diag[k] + s_eff * (hp.diag[k] - h0.diag[k]);
  for (std::size_t k = 0; k < h0.offdiag.size(); ++k) g.offdiag[k] = (weight - s_eff) * h0.offdiag[k];
  return g;
}

void require_inputs(int n, double alpha, double total_time) {
  ModelParams{n, alpha, 0.0}.validate();
  if (!std::isfinite(total_time) || total_time < 0.0)
    throw std::invalid_argument("total time must be finite and >= 0");
  if (std::isinf(alpha)) return;
  if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite or +inf");
}

}  // namespace

EvolutionResult evolve_fixed(int n, double alpha, double total_time, int steps) {
  require_inputs(n, alpha, total_time);
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  const SymmetricState start = polarized_x(n);
  EvolutionResult r;
  r.total_time = total_time;
  r.steps = steps;
  r.final_state.assign(start.amp().begin(), start.amp().end());

  if (total_time > 0.0) {
    const TridiagonalOperator h0 = build_h0(n);
    const TridiagonalOperator hp = build_hp(n, alpha);
    const double dt = total_time / steps;
    const double r3 = std::sqrt(3.0);
    const double c1 = 0.5 - r3 / 6.0, c2 = 0.5 + r3 / 6.0;
    const double a1 = 0.25 + r3 / 6.0, a2 = 0.25 - r3 / 6.0;
    for (int step = 0; step < steps; ++step) {
      const double t0 = step * dt;
      const double s1 = (t0 + c1 * dt) / total_time;
      const double s2 = (t0 + c2 * dt) / total_time;
      apply_exponential(weighted_generator(h0, hp, a1 + a2, a1 * s1 + a2 * s2), dt, r.final_state);
      apply_exponential(weighted_generator(h0, hp, a1 + a2, a2 * s1 + a1 * s2), dt, r.final_state);
    }
  }

  double norm2 = 0.0;
  for (const auto& a : r.final_state) norm2 += std::norm(a);
  r.norm_drift = std::abs(std::sqrt(norm2) - 1.0);
  // The ground state of H_P is |0...0> (index n) for every alpha >= 0.
  r.fidelity = std::norm(r.final_state[n]);
  // Without evolution the state is exactly |=>>; squaring its rounded amplitude 2^(-n/2)
  // would miss 2^-n by an ulp for odd n.
  if (total_time == 0.0) r.fidelity = std::ldexp(1.0, -n);
  return r;
}

EvolutionResult evolve(int n, double alpha, double total_time, int steps, const EvolveOptions& opts) {
  require_inputs(n, alpha, total_time);
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (total_time == 0.0) return evolve_fixed(n, alpha, 0.0, 1);
  int current = std::max(steps, static_cast<int>(std::ceil(total_time / 2.0)));
  EvolutionResult coarse = evolve_fixed(n, alpha, total_time, current);
  while (current <= opts.max_steps / 2) {
    EvolutionResult fine = evolve_fixed(n, alpha, total_time, 2 * current);
    if (std::abs(fine.fidelity - coarse.fidelity) < opts.fidelity_tolerance) return fine;
    coarse = std::move(fine);
    current *= 2;
  }
  throw std::runtime_error("evolution did not converge within max_steps");
}

std::vector<RequiredTime> required_time_scan(const std::vector<int>& n_list, double alpha, double fidelity_target,
                                             const RequiredTimeOptions& opts) {
  if (!(fidelity_target > 0.0 && fidelity_target < 1.0))
    throw std::invalid_argument("fidelity target must lie in (0, 1)");
  std::vector<RequiredTime> out(n_list.size());
  parallel_for(n_list.size(), opts.workers, [&](std::size_t idx) {
    const int n = n_list[idx];
    RequiredTime rt;
    rt.n = n;
    const MinGap mg = min_gap(n, alpha);
    rt.gap_min = mg.gap;
    rt.inverse_gap_sq = 1.0 / (mg.gap * mg.gap);
    const auto fidelity = [&](double t) { return evolve(n, alpha, t).fidelity; };
    if (fidelity(0.0) >= fidelity_target) {
      rt.t_star = 0.0;
      out[idx] = rt;
      return;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (fidelity(hi) < fidelity_target) {
      lo = hi;
      hi *= 2.0;
      if (hi > opts.t_max) {
        std::ostringstream msg;
        msg << "fidelity target " << fidelity_target << " not reached for n=" << n << ", alpha=" << alpha
            << " within T bracket [" << lo << ", " << hi << "]";
        throw std::runtime_error(msg.str());
      }
    }
    while (hi - lo > opts.relative_tolerance * hi) {
      const double mid = 0.5 * (lo + hi);
      if (fidelity(mid) >= fidelity_target)
        hi = mid;
      else
        lo = mid;
    }
    rt.t_star = hi;
    out[idx] = rt;
  });
  return out;
}

}  // namespace adiabatic
