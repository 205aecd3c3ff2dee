#include "adiabatic/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adiabatic {

namespace {
// Below this alpha the linear-in-q limit is used instead of the 0/0 ratio.
constexpr double kSmallAlpha = 1e-8;

void require_n(int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be >= 1, got " + std::to_string(n));
}

void require_alpha(double alpha) {
  if (std::isnan(alpha) || alpha < 0.0)
    throw std::invalid_argument("alpha must be >= 0, got " + std::to_string(alpha));
}
}  // namespace

void ModelParams::validate() const {
  require_n(n);
  require_alpha(alpha);
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("path parameter s must lie in [0,1], got " + std::to_string(s));
}

double TridiagonalOperator::norm_inf() const {
  double best = 0.0;
  const std::size_t d = dim();
  for (std::size_t i = 0; i < d; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(offdiag[i - 1]);
    if (i + 1 < d) row += std::abs(offdiag[i]);
    best = std::max(best, row);
  }
  return best;
}

std::vector<double> TridiagonalOperator::apply(std::span<const double> x) const {
  const std::size_t d = dim();
  if (x.size() != d) throw std::invalid_argument("dimension mismatch in TridiagonalOperator::apply");
  std::vector<double> y(d);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = diag[i] * x[i];
    if (i > 0) acc += offdiag[i - 1] * x[i - 1];
    if (i + 1 < d) acc += offdiag[i] * x[i + 1];
    y[i] = acc;
  }
  return y;
}

SymmetricState::SymmetricState(int n, std::vector<double> amp, double norm_tol) : n_(n), amp_(std::move(amp)) {
  require_n(n);
  if (amp_.size() != static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("symmetric state needs n+1 amplitudes");
  double norm2 = 0.0;
  for (double a : amp_) {
    if (!std::isfinite(a)) throw std::invalid_argument("non-finite amplitude");
    norm2 += a * a;
  }
  if (std::abs(norm2 - 1.0) > norm_tol)
    throw std::invalid_argument("symmetric state is not normalized (|psi|^2 = " + std::to_string(norm2) + ")");
}

double ladder(int n, std::size_t k) {
  const double j = 0.5 * n;
  const double m = static_cast<double>(k) - j;
  // j(j+1) - m(m+1) = (j-m)(j+m+1), better conditioned near m = j.
  const double v = (j - m) * (j + m + 1.0);
  return 0.5 * std::sqrt(std::max(v, 0.0));
}

double log_binomial(int n, int q) {
  if (q < 0 || q > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(q + 1.0) - std::lgamma(n - q + 1.0);
}

double binomial(int n, int q) {
  if (q < 0 || q > n) return 0.0;
  if (n <= 60) {
    // Multiplicative form is exact in double for these sizes.
    double r = 1.0;
    const int kk = std::min(q, n - q);
    for (int i = 1; i <= kk; ++i) r = r * (n - kk + i) / i;
    return std::round(r);
  }
  return std::exp(log_binomial(n, q));
}

double hp_level(int n, double alpha, int q) {
  require_n(n);
  require_alpha(alpha);
  if (q <= 0) return 0.0;
  if (std::isinf(alpha)) return 1.0;
  if (alpha < kSmallAlpha) return static_cast<double>(q) / n;
  // (e^a - e^{a(1-2q/n)}) / (2 sinh a) rewritten without e^a.
  return std::expm1(-2.0 * alpha * q / n) / std::expm1(-2.0 * alpha);
}

TridiagonalOperator build_h0(int n) {
  require_n(n);
  TridiagonalOperator t;
  t.diag.assign(n + 1, 0.5);
  t.offdiag.resize(n);
  for (int k = 0; k < n; ++k) t.offdiag[k] = -ladder(n, k) / n;
  return t;
}

TridiagonalOperator build_hp(int n, double alpha) {
  require_n(n);
  require_alpha(alpha);
  TridiagonalOperator t;
  t.diag.resize(n + 1);
  t.offdiag.assign(n, 0.0);
  for (int k = 0; k <= n; ++k) t.diag[k] = hp_level(n, alpha, n - k);
  return t;
}

TridiagonalOperator build_hs(const ModelParams& params) {
  params.validate();
  const double s = params.s;
  TridiagonalOperator h0 = build_h0(params.n);
  const TridiagonalOperator hp = build_hp(params.n, params.alpha);
  for (std::size_t k = 0; k < h0.dim(); ++k) h0.diag[k] = (1.0 - s) * h0.diag[k] + s * hp.diag[k];
  for (double& o : h0.offdiag) o *= (1.0 - s);
  return h0;
}

std::vector<Level> level_energies_s1(int n, double alpha) {
  require_n(n);
  require_alpha(alpha);
  std::vector<Level> out(n + 1);
  for (int q = 0; q <= n; ++q) {
    out[q].q = q;
    out[q].energy = hp_level(n, alpha, q);
    out[q].degeneracy = binomial(n, q);
    out[q].log_degeneracy = log_binomial(n, q);
  }
  return out;
}

SymmetricState polarized_x(int n) {
  require_n(n);
  std::vector<double> amp(n + 1);
  if (n <= 60) {
    // 2^(-n/2) assembled from exact powers of two.
    const double half_power = (n % 2 == 0) ? std::ldexp(1.0, -n / 2) : std::sqrt(0.5) * std::ldexp(1.0, -(n - 1) / 2);
    for (int k = 0; k <= n; ++k) amp[k] = std::sqrt(binomial(n, k)) * half_power;
    return SymmetricState(n, std::move(amp));
  }
  const double log_norm = -0.5 * n * std::log(2.0);
  for (int k = 0; k <= n; ++k) amp[k] = std::exp(0.5 * log_binomial(n, k) + log_norm);
  // Renormalize to absorb lgamma rounding.
  double norm2 = 0.0;
  for (double a : amp) norm2 += a * a;
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& a : amp) a *= scale;
  return SymmetricState(n, std::move(amp));
}

SymmetricState polarized_z(int n) {
  require_n(n);
  std::vector<double> amp(n + 1, 0.0);
  amp[n] = 1.0;
  return SymmetricState(n, std::move(amp));
}

}  // namespace adiabatic
