#include "adiabatic/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "adiabatic/parallel.hpp"

namespace adiabatic {

namespace {

constexpr double kSmallAlpha = 1e-8;
constexpr int kCoarseS = 401;

void require_alpha(double alpha) {
  if (std::isnan(alpha) || alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
}

// Problem-Hamiltonian energy per qubit in the product state, n -> infinity.
double problem_energy(double theta, double alpha) {
  const double half_sin = std::sin(0.5 * theta);
  const double sin2 = half_sin * half_sin;  // (1 - cos theta) / 2
  if (alpha < kSmallAlpha) return sin2;
  if (std::isinf(alpha)) return sin2 > 0.0 ? 1.0 : 0.0;
  // (e^a - e^{a cos theta}) / (2 sinh a) = (1 - e^{-2 a sin^2(theta/2)}) / (1 - e^{-2a})
  return std::expm1(-2.0 * alpha * sin2) / std::expm1(-2.0 * alpha);
}

double problem_energy_dtheta(double theta, double alpha) {
  if (alpha < kSmallAlpha) return 0.5 * std::sin(theta);
  if (std::isinf(alpha)) return 0.0;
  const double half_sin = std::sin(0.5 * theta);
  return alpha * std::sin(theta) * std::exp(-2.0 * alpha * half_sin * half_sin) / (-std::expm1(-2.0 * alpha));
}

struct LocalMin {
  double theta;
  double energy;
};

// Root of the theta-derivative inside [lo, hi], or the better endpoint if there is no sign change.
LocalMin refine_minimum(double lo, double hi, double s, double alpha, double tol) {
  double dlo = mf_energy_dtheta(lo, s, alpha);
  const double dhi = mf_energy_dtheta(hi, s, alpha);
  if (!(dlo < 0.0 && dhi > 0.0)) {
    const double elo = mf_energy(lo, 0.0, s, alpha);
    const double ehi = mf_energy(hi, 0.0, s, alpha);
    return elo <= ehi ? LocalMin{lo, elo} : LocalMin{hi, ehi};
  }
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double dm = mf_energy_dtheta(mid, s, alpha);
    if (dm < 0.0) {
      lo = mid;
      dlo = dm;
    } else {
      hi = mid;
    }
  }
  const double theta = 0.5 * (lo + hi);
  return {theta, mf_energy(theta, 0.0, s, alpha)};
}

struct JumpScan {
  double s_c;
  double theta_lo;
  double theta_hi;
};

JumpScan locate_steepest(double alpha, double s_resolution) {
  std::vector<double> theta(kCoarseS);
  for (int i = 0; i < kCoarseS; ++i) theta[i] = mf_minimize(static_cast<double>(i) / (kCoarseS - 1), alpha).theta;
  int best = 0;
  for (int i = 1; i + 1 < kCoarseS; ++i)
    if (std::abs(theta[i + 1] - theta[i]) > std::abs(theta[best + 1] - theta[best])) best = i;
  double lo = static_cast<double>(best) / (kCoarseS - 1);
  double hi = static_cast<double>(best + 1) / (kCoarseS - 1);
  double tlo = theta[best];
  double thi = theta[best + 1];
  while (hi - lo > s_resolution) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double tm = mf_minimize(mid, alpha).theta;
    if (std::abs(tm - tlo) <= std::abs(tm - thi)) {
      lo = mid;
      tlo = tm;
    } else {
      hi = mid;
      thi = tm;
    }
  }
  return {0.5 * (lo + hi), tlo, thi};
}

TransitionPoint classify_jump(double alpha, double s_resolution) {
  const JumpScan scan = locate_steepest(alpha, s_resolution);
  TransitionPoint tp;
  tp.alpha = alpha;
  tp.s_c = scan.s_c;
  tp.theta_jump = std::abs(scan.theta_hi - scan.theta_lo);
  tp.sx_jump = 0.5 * std::abs(std::sin(scan.theta_lo) - std::sin(scan.theta_hi));
  const bool first = tp.theta_jump >= MeanFieldOptions{}.min_separation && tp.sx_jump > kSxJumpThreshold;
  tp.order = first ? TransitionOrder::first : TransitionOrder::none;
  return tp;
}

// Width of the alpha window around the located endpoint that is reported as second order.
constexpr double kEndpointBand = 1e-5;

}  // namespace

double mf_energy(double theta, double phi, double s, double alpha) {
  require_alpha(alpha);
  return (1.0 - s) * (1.0 - std::sin(theta) * std::cos(phi)) / 2.0 + s * problem_energy(theta, alpha);
}

double mf_energy_dtheta(double theta, double s, double alpha) {
  require_alpha(alpha);
  return -(1.0 - s) * std::cos(theta) / 2.0 + s * problem_energy_dtheta(theta, alpha);
}

double mf_energy_finite(double theta, double phi, double s, double alpha, int n) {
  require_alpha(alpha);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double half_sin = std::sin(0.5 * theta);
  const double sin2 = half_sin * half_sin;
  double hp;
  if (alpha < kSmallAlpha) {
    hp = sin2;
  } else if (std::isinf(alpha)) {
    // Only |0...0> has zero energy: 1 - cos^{2n}(theta/2).
    hp = -std::expm1(n * std::log1p(-sin2));
  } else {
    // (e^a - (cos^2 e^{a/n} + sin^2 e^{-a/n})^n) / (2 sinh a), divided through by e^a.
    const double inner = std::log1p(-sin2 * (-std::expm1(-2.0 * alpha / n)));
    hp = std::expm1(n * inner) / std::expm1(-2.0 * alpha);
  }
  return (1.0 - s) * (1.0 - std::sin(theta) * std::cos(phi)) / 2.0 + s * hp;
}

MeanFieldSolution mf_minimize(double s, double alpha, const MeanFieldOptions& opts) {
  require_alpha(alpha);
  if (opts.grid < 3 || !(opts.refine_tolerance > 0.0)) throw std::invalid_argument("invalid mean-field options");
  const int g = opts.grid;
  std::vector<double> theta(g), e(g);
  for (int i = 0; i < g; ++i) {
    theta[i] = std::numbers::pi * i / (g - 1);
    e[i] = mf_energy(theta[i], 0.0, s, alpha);
  }
  std::vector<LocalMin> minima;
  for (int i = 0; i < g; ++i) {
    const bool left_ok = (i == 0) || e[i] <= e[i - 1];
    const bool right_ok = (i == g - 1) || e[i] <= e[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = theta[std::max(i - 1, 0)];
    const double hi = theta[std::min(i + 1, g - 1)];
    LocalMin m = refine_minimum(lo, hi, s, alpha, opts.refine_tolerance);
    if (m.energy > e[i]) m = {theta[i], e[i]};
    minima.push_back(m);
  }
  std::sort(minima.begin(), minima.end(), [](const LocalMin& a, const LocalMin& b) { return a.energy < b.energy; });

  MeanFieldSolution sol;
  sol.theta = minima.front().theta;
  sol.energy = minima.front().energy;
  for (std::size_t k = 1; k < minima.size(); ++k) {
    if (std::abs(minima[k].theta - sol.theta) < opts.min_separation) continue;
    if (minima[k].energy - sol.energy <= opts.degeneracy_energy) {
      sol.degenerate = true;
      sol.other_theta = minima[k].theta;
      sol.other_energy = minima[k].energy;
    }
    break;
  }
  return sol;
}

std::vector<std::vector<double>> sx_surface(const std::vector<double>& alpha_grid, const std::vector<double>& s_grid,
                                            unsigned workers) {
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()) || !std::is_sorted(s_grid.begin(), s_grid.end()))
    throw std::invalid_argument("grids must be ascending");
  std::vector<std::vector<double>> out(alpha_grid.size(), std::vector<double>(s_grid.size()));
  const std::size_t cols = s_grid.size();
  parallel_for(alpha_grid.size() * cols, workers, [&](std::size_t idx) {
    const std::size_t a = idx / cols;
    const std::size_t b = idx % cols;
    const MeanFieldSolution sol = mf_minimize(s_grid[b], alpha_grid[a]);
    out[a][b] = 0.5 * std::sin(sol.theta) * std::cos(sol.phi);
  });
  return out;
}

const char* to_string(TransitionOrder o) {
  switch (o) {
    case TransitionOrder::none:
      return "none";
    case TransitionOrder::first:
      return "first";
    case TransitionOrder::second:
      return "second";
  }
  return "unknown";
}

TransitionPoint transition_line(double alpha, double s_resolution) {
  require_alpha(alpha);
  if (!(s_resolution > 0.0)) throw std::invalid_argument("s_resolution must be > 0");
  TransitionPoint tp = classify_jump(alpha, s_resolution);
  if (tp.order == TransitionOrder::first) return tp;
  // The endpoint search is deterministic, so computing it once is enough.
  static const CriticalPoint endpoint = critical_point();
  if (std::abs(alpha - endpoint.alpha_c) <= kEndpointBand) {
    tp.order = TransitionOrder::second;
    tp.s_c = endpoint.s_c;
  }
  return tp;
}

CriticalPoint critical_point(double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  double lo = 1.0;   // no transition
  double hi = 10.0;  // first order
  if (classify_jump(lo, 1e-12).order == TransitionOrder::first || classify_jump(hi, 1e-12).order != TransitionOrder::first)
    throw std::runtime_error("critical-point bracket [1, 10] does not straddle the endpoint");
  TransitionPoint at_hi = classify_jump(hi, 1e-12);
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const TransitionPoint tp = classify_jump(mid, 1e-12);
    if (tp.order == TransitionOrder::first) {
      hi = mid;
      at_hi = tp;
    } else {
      lo = mid;
    }
  }
  return {0.5 * (lo + hi), at_hi.s_c};
}

EndpointReadings endpoint_readings() {
  const double a = 1.5 * std::sqrt(3.0);
  const double base = 3.0 * std::sqrt(6.0) * std::exp(1.5);
  return {2.0 / (2.0 + base / std::sinh(a)), 2.0 / (2.0 + base * std::asinh(a))};
}

}  // namespace adiabatic
