#pragma once

#include <string_view>
#include <vector>

#include "adiabatic/model.hpp"

namespace adiabatic {

struct GapCurve {
  std::vector<double> s;
  std::vector<double> gap;
};

struct MinGap {
  double s_star = 0.0;
  double gap = 0.0;
};

struct MinGapOptions {
  double s_tolerance = 1e-9;
  int coarse_points = 200;
  unsigned workers = 1;
};

enum class ScalingModel { power, exponential };
std::string_view to_string(ScalingModel m);

/// Least-squares fit of log(gap) against log(n) (power) or n (exponential).
struct LogFit {
  double slope = 0.0;      // nu for power, c for exponential (gap ~ n^-nu or e^-cn)
  double intercept = 0.0;  // log-space intercept a
  double residual = 0.0;   // RMS residual in log space
};

struct GapScalingFit {
  ScalingModel model_kind = ScalingModel::power;
  double exponent = 0.0;  // nu or c for the chosen model
  double intercept = 0.0;
  double residual = 0.0;
  LogFit power;
  LogFit exponential;
  std::vector<int> n_values;
  std::vector<MinGap> minima;
};

enum class DosKind { analytic_s0, analytic_s1_full, analytic_s1_sector, empirical };
std::string_view to_string(DosKind k);

struct DosCurve {
  DosKind kind = DosKind::empirical;
  std::vector<double> omega;
  std::vector<double> density;
};

struct EmpiricalDos {
  DosCurve curve;               // bin centers, density normalized to unit mass
  std::vector<double> edges;    // bins + 1 edges on [0, 1]
  std::vector<double> counts;   // raw state counts per bin (sum = 2^n)
  double total = 0.0;
};

struct AntiCrossing {
  double s = 0.0;
  int lower_level = 0;  // pair (lower_level, lower_level + 1)
  double gap = 0.0;
};

GapCurve gap_curve(int n, double alpha, const std::vector<double>& s_grid, unsigned workers = 1);

/// Global minimum of E1 - E0 over s in [0,1]: coarse scan then golden-section refinement.
MinGap min_gap(int n, double alpha, const MinGapOptions& opts = {});

/// Fits both decay models over n_list (>= 4 ascending entries) and keeps the lower-residual one.
GapScalingFit gap_scaling(double alpha, const std::vector<int>& n_list, const MinGapOptions& opts = {});
/// Same fits on precomputed minima.
GapScalingFit fit_gap_scaling(const std::vector<int>& n_list, const std::vector<MinGap>& minima);

LogFit fit_power(const std::vector<double>& n, const std::vector<double>& gap);
LogFit fit_exponential(const std::vector<double>& n, const std::vector<double>& gap);

/// Gaussian level density at s = 0 as printed: (2n/pi) exp(-2n (omega - 1/2)^2).
double dos_s0_value(int n, double omega);
/// Maximal-spin-sector density at s = 1: 1 / (alpha (1 - 2 omega + coth alpha)).
double dos_s1_sector_value(double alpha, double omega);
/// Full-spectrum density at s = 1 with the binomial Gaussian factor.
double dos_s1_full_value(int n, double alpha, double omega);

DosCurve dos_s0_analytic(int n, const std::vector<double>& omega);
DosCurve dos_s1_analytic(int n, double alpha, const std::vector<double>& omega);
DosCurve dos_s1_sector(double alpha, const std::vector<double>& omega);
/// Binomially weighted histogram of the exact spectrum at s = 0 or s = 1.
EmpiricalDos dos_empirical(int n, double alpha, int s, int bins);

/// Integral of an analytic density over each bin, normalized to unit total mass on [0,1].
/// kind must be one of the analytic kinds; alpha is ignored for analytic_s0.
std::vector<double> analytic_bin_masses(DosKind kind, int n, double alpha, const std::vector<double>& edges);

/// Empirical s = 1 histogram against the bin-integrated full analytic density, both
/// normalized to unit mass. discrepancy = max_b |empirical - analytic| / max_b analytic.
struct DosComparison {
  std::vector<double> edges;
  std::vector<double> counts;
  std::vector<double> empirical_mass;
  std::vector<double> analytic_mass;
  double discrepancy = 0.0;
};
DosComparison dos_compare_s1(int n, double alpha, int bins);

struct AntiCrossingOptions {
  /// A local gap minimum counts when below prominence * median gap of that pair.
  double prominence = 0.5;
  double s_tolerance = 1e-9;
  unsigned workers = 1;
};

/// Avoided crossings among the lowest `level_count` levels, sorted by s then level.
std::vector<AntiCrossing> anticrossing_scan(int n, double alpha, int level_count, const std::vector<double>& s_grid,
                                            const AntiCrossingOptions& opts = {});

/// Locations of the ground-state anti-crossing s_c and the nearest first-excited
/// anti-crossings on either side (s1 < s_c < s2) when present.
struct Cascade {
  bool has_sc = false;
  bool has_s1 = false;
  bool has_s2 = false;
  double s1 = 0.0;
  double sc = 0.0;
  double s2 = 0.0;

  bool complete() const { return has_sc && has_s1 && has_s2 && s1 < sc && sc < s2; }
};
Cascade ground_cascade(const std::vector<AntiCrossing>& crossings);

/// Golden-section minimization of f on [lo, hi] to |x error| <= tol.
template <typename F>
double golden_section(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace adiabatic
