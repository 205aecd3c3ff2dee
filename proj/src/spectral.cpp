#include "adiabatic/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "adiabatic/eigensolver.hpp"
#include "adiabatic/parallel.hpp"

namespace adiabatic {

namespace {

constexpr double kSmallAlpha = 1e-8;

double path_gap(int n, double alpha, double s) { return ground_gap(build_hs({n, alpha, s})); }

double pair_gap(int n, double alpha, double s, int lower) {
  const std::vector<double> v = lowest_values(build_hs({n, alpha, s}), static_cast<std::size_t>(lower) + 2);
  return v[lower + 1] - v[lower];
}

// d(E1 - E0)/ds by Hellmann-Feynman: <psi1|V|psi1> - <psi0|V|psi0> with V = H_P - H_0.
double gap_slope(const TridiagonalOperator& h0, const TridiagonalOperator& hp, double s) {
  TridiagonalOperator h;
  h.diag.resize(h0.dim());
  h.offdiag.resize(h0.offdiag.size());
  for (std::size_t k = 0; k < h0.dim(); ++k) h.diag[k] = (1.0 - s) * h0.diag[k] + s * hp.diag[k];
  for (std::size_t k = 0; k < h0.offdiag.size(); ++k) h.offdiag[k] = (1.0 - s) * h0.offdiag[k];
  const GroundPair gp = ground_pair(h);
  const auto expect_v = [&](const SymmetricState& psi) {
    double acc = 0.0;
    for (std::size_t k = 0; k < h0.dim(); ++k) acc += (hp.diag[k] - h0.diag[k]) * psi[k] * psi[k];
    for (std::size_t k = 0; k < h0.offdiag.size(); ++k) acc -= 2.0 * h0.offdiag[k] * psi[k] * psi[k + 1];
    return acc;
  };
  return expect_v(gp.psi1) - expect_v(gp.psi0);
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = (count == 1) ? a : a + (b - a) * i / (count - 1);
  out.back() = b;
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

LogFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double k = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("degenerate abscissae in least-squares fit");
  const double slope = (k * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / k;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    rss += r * r;
  }
  // Report decay rates as positive numbers: log gap = a - slope * x.
  return {-slope, intercept, std::sqrt(rss / k)};
}

// alpha * coth(alpha) with its alpha -> 0 limit.
double alpha_coth(double alpha) { return alpha < kSmallAlpha ? 1.0 : alpha / std::tanh(alpha); }

}  // namespace

std::string_view to_string(ScalingModel m) { return m == ScalingModel::power ? "power" : "exponential"; }

std::string_view to_string(DosKind k) {
  switch (k) {
    case DosKind::analytic_s0:
      return "analytic_s0";
    case DosKind::analytic_s1_full:
      return "analytic_s1_full";
    case DosKind::analytic_s1_sector:
      return "analytic_s1_sector";
    case DosKind::empirical:
      return "empirical";
  }
  return "unknown";
}

GapCurve gap_curve(int n, double alpha, const std::vector<double>& s_grid, unsigned workers) {
  GapCurve c;
  c.s = s_grid;
  c.gap.resize(s_grid.size());
  parallel_for(s_grid.size(), workers, [&](std::size_t i) { c.gap[i] = path_gap(n, alpha, s_grid[i]); });
  return c;
}

MinGap min_gap(int n, double alpha, const MinGapOptions& opts) {
  if (!(opts.s_tolerance > 0.0)) throw std::invalid_argument("s_tolerance must be > 0");
  if (opts.coarse_points < 3) throw std::invalid_argument("coarse grid needs at least 3 points");
  ModelParams{n, alpha, 0.0}.validate();
  const std::vector<double> grid = linspace(0.0, 1.0, opts.coarse_points);
  const GapCurve coarse = gap_curve(n, alpha, grid, opts.workers);
  const auto it = std::min_element(coarse.gap.begin(), coarse.gap.end());
  const std::size_t i = static_cast<std::size_t>(it - coarse.gap.begin());
  const double lo = grid[i == 0 ? 0 : i - 1];
  const double hi = grid[std::min(i + 1, grid.size() - 1)];
  const auto f = [&](double s) { return path_gap(n, alpha, s); };
  MinGap best{grid[i], *it};
  const double s_golden = golden_section(f, lo, hi, opts.s_tolerance);
  const double g_golden = f(s_golden);
  if (g_golden <= best.gap) best = {s_golden, g_golden};

  // Near a smooth minimum the gap is flat to O(ds^2), so comparing gap values cannot
  // place s* better than ~sqrt(eps). The slope changes sign linearly and can.
  if (lo < hi) {
    const TridiagonalOperator h0 = build_h0(n);
    const TridiagonalOperator hp = build_hp(n, alpha);
    double a = lo, b = hi;
    if (gap_slope(h0, hp, a) < 0.0 && gap_slope(h0, hp, b) > 0.0) {
      while (b - a > opts.s_tolerance) {
        const double mid = 0.5 * (a + b);
        (gap_slope(h0, hp, mid) < 0.0 ? a : b) = mid;
      }
      const double s_root = 0.5 * (a + b);
      const double g_root = f(s_root);
      // Accept unless it is measurably worse than the value-based search.
      if (g_root <= best.gap * (1.0 + 1e-9)) best = {s_root, g_root};
    }
  }
  return best;
}

GapScalingFit fit_gap_scaling(const std::vector<int>& n_list, const std::vector<MinGap>& minima) {
  if (n_list.size() < 4) throw std::invalid_argument("gap scaling needs at least 4 system sizes");
  if (minima.size() != n_list.size()) throw std::invalid_argument("minima and n_list differ in length");
  std::vector<double> n(n_list.begin(), n_list.end());
  std::vector<double> gap;
  for (const MinGap& m : minima) {
    if (!(m.gap > 0.0)) throw std::domain_error("non-positive minimum gap cannot be fitted in log space");
    gap.push_back(m.gap);
  }
  GapScalingFit fit;
  fit.n_values = n_list;
  fit.minima = minima;
  fit.power = fit_power(n, gap);
  fit.exponential = fit_exponential(n, gap);
  const LogFit& best = fit.power.residual <= fit.exponential.residual ? fit.power : fit.exponential;
  fit.model_kind = (&best == &fit.power) ? ScalingModel::power : ScalingModel::exponential;
  fit.exponent = best.slope;
  fit.intercept = best.intercept;
  fit.residual = best.residual;
  return fit;
}

GapScalingFit gap_scaling(double alpha, const std::vector<int>& n_list, const MinGapOptions& opts) {
  if (n_list.size() < 4) throw std::invalid_argument("gap scaling needs at least 4 system sizes");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end())
    throw std::invalid_argument("n_list must be strictly ascending");
  std::vector<MinGap> minima(n_list.size());
  MinGapOptions inner = opts;
  inner.workers = 1;
  parallel_for(n_list.size(), opts.workers, [&](std::size_t i) { minima[i] = min_gap(n_list[i], alpha, inner); });
  return fit_gap_scaling(n_list, minima);
}

LogFit fit_power(const std::vector<double>& n, const std::vector<double>& gap) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    x.push_back(std::log(n[i]));
    y.push_back(std::log(gap[i]));
  }
  return least_squares(x, y);
}

LogFit fit_exponential(const std::vector<double>& n, const std::vector<double>& gap) {
  std::vector<double> y;
  for (double g : gap) y.push_back(std::log(g));
  return least_squares(n, y);
}

double dos_s0_value(int n, double omega) {
  const double d = omega - 0.5;
  return 2.0 * n / std::numbers::pi * std::exp(-2.0 * n * d * d);
}

double dos_s1_sector_value(double alpha, double omega) {
  if (std::isnan(alpha) || alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (std::isinf(alpha)) {
    if (omega < 1.0) return 0.0;
    throw std::domain_error("sector density diverges at omega = 1 in the projector limit");
  }
  // alpha (1 - 2 omega + coth alpha), finite as alpha -> 0.
  const double denom = alpha * (1.0 - 2.0 * omega) + alpha_coth(alpha);
  if (!(denom > 0.0))
    throw std::domain_error("sector density undefined at omega = " + std::to_string(omega) +
                            " (1 - 2 omega + coth alpha <= 0)");
  return 1.0 / denom;
}

double dos_s1_full_value(int n, double alpha, double omega) {
  const double jacobian = dos_s1_sector_value(alpha, omega);
  // x = (alpha + ln(e^alpha - 2 omega sinh alpha)) / (2 alpha), written without e^alpha.
  double x;
  if (alpha < kSmallAlpha) {
    x = 1.0 - omega;
  } else {
    const double arg = -omega * (-std::expm1(-2.0 * alpha));
    if (!(arg > -1.0)) throw std::domain_error("omega outside the s = 1 spectrum");
    x = 1.0 + std::log1p(arg) / (2.0 * alpha);
  }
  const double d = x - 0.5;
  return 2.0 * n / std::numbers::pi * std::exp(-2.0 * n * d * d) * jacobian;
}

DosCurve dos_s0_analytic(int n, const std::vector<double>& omega) {
  DosCurve c{DosKind::analytic_s0, omega, {}};
  for (double w : omega) c.density.push_back(dos_s0_value(n, w));
  return c;
}

DosCurve dos_s1_analytic(int n, double alpha, const std::vector<double>& omega) {
  DosCurve c{DosKind::analytic_s1_full, omega, {}};
  for (double w : omega) c.density.push_back(dos_s1_full_value(n, alpha, w));
  return c;
}

DosCurve dos_s1_sector(double alpha, const std::vector<double>& omega) {
  DosCurve c{DosKind::analytic_s1_sector, omega, {}};
  for (double w : omega) c.density.push_back(dos_s1_sector_value(alpha, w));
  return c;
}

EmpiricalDos dos_empirical(int n, double alpha, int s, int bins) {
  if (bins < 2) throw std::invalid_argument("histogram needs at least 2 bins");
  if (s != 0 && s != 1) throw std::invalid_argument("empirical density is available only at s = 0 or s = 1");
  ModelParams{n, alpha, static_cast<double>(s)}.validate();
  EmpiricalDos out;
  out.edges = linspace(0.0, 1.0, bins + 1);
  out.counts.assign(bins, 0.0);
  for (int q = 0; q <= n; ++q) {
    // s = 0: S_x levels (1/2 - m_x/n) = q/n; s = 1: problem-Hamiltonian levels.
    const double w = (s == 0) ? static_cast<double>(q) / n : hp_level(n, alpha, q);
    const double weight = binomial(n, q);
    const int b = std::clamp(static_cast<int>(std::floor(w * bins)), 0, bins - 1);
    out.counts[b] += weight;
    out.total += weight;
  }
  out.curve.kind = DosKind::empirical;
  const double width = 1.0 / bins;
  for (int b = 0; b < bins; ++b) {
    out.curve.omega.push_back(0.5 * (out.edges[b] + out.edges[b + 1]));
    out.curve.density.push_back(out.counts[b] / (out.total * width));
  }
  return out;
}

std::vector<double> analytic_bin_masses(DosKind kind, int n, double alpha, const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("need at least one bin");
  const auto density = [&](double w) {
    switch (kind) {
      case DosKind::analytic_s0:
        return dos_s0_value(n, w);
      case DosKind::analytic_s1_full:
        return dos_s1_full_value(n, alpha, w);
      case DosKind::analytic_s1_sector:
        return dos_s1_sector_value(alpha, w);
      case DosKind::empirical:
        break;
    }
    throw std::invalid_argument("analytic_bin_masses needs an analytic density kind");
  };
  // Composite 5-point Gauss-Legendre; 64 panels per bin resolves the n ~ 1e3 Gaussians.
  static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                               0.9061798459386640};
  static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                 0.2369268850561891, 0.2369268850561891};
  constexpr int kPanels = 64;
  std::vector<double> mass(edges.size() - 1, 0.0);
  double total = 0.0;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const double h = (edges[b + 1] - edges[b]) / kPanels;
    double acc = 0.0;
    for (int p = 0; p < kPanels; ++p) {
      const double mid = edges[b] + (p + 0.5) * h;
      for (std::size_t g = 0; g < nodes.size(); ++g) acc += weights[g] * density(mid + 0.5 * h * nodes[g]);
    }
    mass[b] = 0.5 * h * acc;
    total += mass[b];
  }
  if (!(total > 0.0)) throw std::domain_error("analytic density integrates to zero on the bins");
  for (double& m : mass) m /= total;
  return mass;
}

DosComparison dos_compare_s1(int n, double alpha, int bins) {
  if (std::isinf(alpha)) throw std::invalid_argument("the analytic s = 1 density needs finite alpha");
  const EmpiricalDos emp = dos_empirical(n, alpha, 1, bins);
  DosComparison c;
  c.edges = emp.edges;
  c.counts = emp.counts;
  c.analytic_mass = analytic_bin_masses(DosKind::analytic_s1_full, n, alpha, emp.edges);
  double diff = 0.0, peak = 0.0;
  for (std::size_t b = 0; b < emp.counts.size(); ++b) {
    c.empirical_mass.push_back(emp.counts[b] / emp.total);
    diff = std::max(diff, std::abs(c.empirical_mass[b] - c.analytic_mass[b]));
    peak = std::max(peak, c.analytic_mass[b]);
  }
  c.discrepancy = diff / peak;
  return c;
}

std::vector<AntiCrossing> anticrossing_scan(int n, double alpha, int level_count, const std::vector<double>& s_grid,
                                            const AntiCrossingOptions& opts) {
  ModelParams{n, alpha, 0.0}.validate();
  if (level_count < 2 || level_count > n + 1)
    throw std::invalid_argument("level_count must lie in [2, n+1], got " + std::to_string(level_count));
  if (s_grid.size() < 3) throw std::invalid_argument("anti-crossing scan needs at least 3 grid points");
  if (!std::is_sorted(s_grid.begin(), s_grid.end())) throw std::invalid_argument("s grid must be ascending");

  std::vector<std::vector<double>> levels(s_grid.size());
  parallel_for(s_grid.size(), opts.workers, [&](std::size_t i) {
    levels[i] = lowest_values(build_hs({n, alpha, s_grid[i]}), static_cast<std::size_t>(level_count));
  });

  std::vector<AntiCrossing> out;
  for (int k = 0; k + 1 < level_count; ++k) {
    std::vector<double> g(s_grid.size());
    for (std::size_t i = 0; i < s_grid.size(); ++i) g[i] = levels[i][k + 1] - levels[i][k];
    const double threshold = opts.prominence * median(g);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      if (!(g[i] < g[i - 1] && g[i] <= g[i + 1] && g[i] < threshold)) continue;
      const auto f = [&](double s) { return pair_gap(n, alpha, s, k); };
      const double s_ref = golden_section(f, s_grid[i - 1], s_grid[i + 1], opts.s_tolerance);
      const double g_ref = f(s_ref);
      if (g_ref <= g[i])
        out.push_back({s_ref, k, g_ref});
      else
        out.push_back({s_grid[i], k, g[i]});
    }
  }
  std::sort(out.begin(), out.end(), [](const AntiCrossing& a, const AntiCrossing& b) {
    return a.s != b.s ? a.s < b.s : a.lower_level < b.lower_level;
  });
  return out;
}

Cascade ground_cascade(const std::vector<AntiCrossing>& crossings) {
  Cascade c;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const AntiCrossing& x : crossings) {
    if (x.lower_level == 0 && x.gap < best_gap) {
      best_gap = x.gap;
      c.sc = x.s;
      c.has_sc = true;
    }
  }
  if (!c.has_sc) return c;
  for (const AntiCrossing& x : crossings) {
    if (x.lower_level != 1) continue;
    if (x.s < c.sc && (!c.has_s1 || x.s > c.s1)) {
      c.s1 = x.s;
      c.has_s1 = true;
    }
    if (x.s > c.sc && (!c.has_s2 || x.s < c.s2)) {
      c.s2 = x.s;
      c.has_s2 = true;
    }
  }
  return c;
}

}  // namespace adiabatic
