#include "adiabatic/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace adiabatic {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxQlIterations = 60;

void require_finite(const TridiagonalOperator& t) {
  if (t.dim() == 0) throw std::invalid_argument("empty tridiagonal operator");
  if (t.offdiag.size() + 1 != t.dim()) throw std::invalid_argument("off-diagonal must have dim-1 entries");
  for (double v : t.diag)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite diagonal entry");
  for (double v : t.offdiag)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite off-diagonal entry");
}

struct Bounds {
  double lo;
  double hi;
};

Bounds gershgorin(const TridiagonalOperator& t) {
  const std::size_t d = t.dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < d; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < d) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pad = 2.0 * kEps * std::max({std::abs(lo), std::abs(hi), 1.0});
  return {lo - pad, hi + pad};
}

double pivot_floor(const TridiagonalOperator& t) {
  double emax = 1.0;
  for (double e : t.offdiag) emax = std::max(emax, e * e);
  return std::numeric_limits<double>::min() * emax;
}

std::size_t sturm_count_impl(const TridiagonalOperator& t, double x, double pivmin) {
  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  const std::size_t d = t.dim();
  for (std::size_t i = 1; i < d; ++i) {
    const double e = t.offdiag[i - 1];
    q = (t.diag[i] - x) - e * e / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

// Solves (T - lambda I) x = b in place with partial pivoting; near-zero pivots are
// replaced by `tiny`, which is what makes inverse iteration work at an exact eigenvalue.
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const TridiagonalOperator& t, double lambda, double tiny) {
    const std::size_t n = t.dim();
    d_.resize(n);
    for (std::size_t i = 0; i < n; ++i) d_[i] = t.diag[i] - lambda;
    dl_ = t.offdiag;
    du_ = t.offdiag;
    du2_.assign(n > 2 ? n - 2 : 0, 0.0);
    swap_.assign(n > 0 ? n - 1 : 0, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (std::abs(d_[i]) < tiny) d_[i] = std::copysign(tiny, d_[i] == 0.0 ? 1.0 : d_[i]);
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        swap_[i] = true;
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
      }
    }
    if (std::abs(d_[n - 1]) < tiny) d_[n - 1] = std::copysign(tiny, d_[n - 1] == 0.0 ? 1.0 : d_[n - 1]);
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swap_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t ii = n >= 2 ? n - 2 : 0; ii-- > 0;) {
      b[ii] = (b[ii] - du_[ii] * b[ii + 1] - du2_[ii] * b[ii + 2]) / d_[ii];
    }
  }

 private:
  std::vector<double> d_, dl_, du_, du2_;
  std::vector<bool> swap_;
};

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void scale(std::vector<double>& v, double f) {
  for (double& x : v) x *= f;
}

double residual(const TridiagonalOperator& t, const std::vector<double>& v, double lambda) {
  const std::vector<double> tv = t.apply(v);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r += (tv[i] - lambda * v[i]) * (tv[i] - lambda * v[i]);
  return std::sqrt(r);
}

void apply_sign_convention(std::vector<double>& v) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double threshold = 1e-8 * vmax;
  for (double x : v) {
    if (std::abs(x) > threshold) {
      if (x < 0.0) scale(v, -1.0);
      return;
    }
  }
}

// Deterministic start vector with no special alignment to the Dicke structure.
std::vector<double> start_vector(std::size_t n, std::size_t salt) {
  std::vector<double> v(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ULL ^ (salt * 0xBF58476D1CE4E5B9ULL);
  for (double& x : v) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    x = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  scale(v, 1.0 / norm2(v));
  return v;
}

std::vector<double> inverse_iteration(const TridiagonalOperator& t, double lambda, double tnorm,
                                      const std::vector<const std::vector<double>*>& cluster, std::size_t salt) {
  const std::size_t n = t.dim();
  if (n == 1) return {1.0};
  const double tiny = kEps * std::max(tnorm, std::numeric_limits<double>::min());
  const double target = 1e-12 * std::max(tnorm, 1e-300);
  double shift = lambda;
  std::vector<double> best;
  double best_res = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 4; ++attempt) {
    const ShiftedTridiagonalLU lu(t, shift, tiny);
    std::vector<double> x = start_vector(n, salt + 7919 * attempt);
    for (int it = 0; it < 8; ++it) {
      lu.solve(x);
      bool finite = true;
      for (double v : x) finite = finite && std::isfinite(v);
      if (!finite) break;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto* other : cluster) {
          const double dot = std::inner_product(x.begin(), x.end(), other->begin(), 0.0);
          for (std::size_t i = 0; i < n; ++i) x[i] -= dot * (*other)[i];
        }
      }
      const double nx = norm2(x);
      if (!(nx > 0.0) || !std::isfinite(nx)) break;
      scale(x, 1.0 / nx);
      if (it >= 1) {
        const double r = residual(t, x, lambda);
        if (r < best_res) {
          best_res = r;
          best = x;
        }
        if (r <= target && it >= 2) return x;
      }
    }
    // Nudge the shift off an exactly singular factorization and retry.
    shift = lambda + (attempt + 1) * 4.0 * tiny;
  }
  if (best.empty()) throw std::runtime_error("inverse iteration failed to produce a finite eigenvector");
  return best;
}

}  // namespace

std::size_t sturm_count(const TridiagonalOperator& t, double x) {
  require_finite(t);
  return sturm_count_impl(t, x, pivot_floor(t));
}

EigenResult eigen_all(const TridiagonalOperator& t, bool with_vectors) {
  require_finite(t);
  const std::size_t n = t.dim();
  std::vector<double> d = t.diag;
  std::vector<double> e(n, 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());

  // z[row][col]: column col is the eigenvector for d[col].
  std::vector<std::vector<double>> z;
  if (with_vectors) {
    z.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) z[i][i] = 1.0;
  }

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxQlIterations) throw std::runtime_error("implicit QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool deflated = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (with_vectors) {
            for (std::size_t k = 0; k < n; ++k) {
              f = z[k][i + 1];
              z[k][i + 1] = s * z[k][i] + c * f;
              z[k][i] = c * z[k][i] - s * f;
            }
          }
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  EigenResult out;
  out.values.reserve(n);
  for (std::size_t i : order) out.values.push_back(d[i]);
  if (with_vectors) {
    out.vectors.reserve(n);
    for (std::size_t i : order) {
      std::vector<double> v(n);
      for (std::size_t k = 0; k < n; ++k) v[k] = z[k][i];
      apply_sign_convention(v);
      out.vectors.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<double> lowest_values(const TridiagonalOperator& t, std::size_t count) {
  require_finite(t);
  count = std::min(count, t.dim());
  const double pivmin = pivot_floor(t);
  const Bounds g = gershgorin(t);
  // Shared brackets: every Sturm count tightens all of them.
  std::vector<double> lo(count, g.lo), hi(count, g.hi);
  std::vector<double> out(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    double a = lo[idx], b = hi[idx];
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (!(mid > a && mid < b)) break;
      const std::size_t c = sturm_count_impl(t, mid, pivmin);
      for (std::size_t j = idx; j < count; ++j) {
        if (c > j)
          hi[j] = std::min(hi[j], mid);
        else
          lo[j] = std::max(lo[j], mid);
      }
      a = lo[idx];
      b = hi[idx];
    }
    out[idx] = 0.5 * (a + b);
  }
  return out;
}

EigenResult lowest_pairs(const TridiagonalOperator& t, std::size_t count) {
  EigenResult out;
  out.values = lowest_values(t, count);
  const double tnorm = t.norm_inf();
  const double cluster_tol = 1e-3 * std::max(tnorm, 1e-300);
  out.vectors.reserve(out.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    std::vector<const std::vector<double>*> cluster;
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(out.values[i] - out.values[j]) <= cluster_tol) cluster.push_back(&out.vectors[j]);
    std::vector<double> v = inverse_iteration(t, out.values[i], tnorm, cluster, i);
    apply_sign_convention(v);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

GroundPair ground_pair(const TridiagonalOperator& t) {
  if (t.dim() < 2) throw std::invalid_argument("ground_pair needs dim >= 2");
  EigenResult r = lowest_pairs(t, 2);
  const int n = static_cast<int>(t.dim()) - 1;
  GroundPair gp;
  gp.e0 = r.values[0];
  gp.e1 = r.values[1];
  gp.gap = std::max(0.0, gp.e1 - gp.e0);
  gp.psi0 = SymmetricState(n, std::move(r.vectors[0]), 1e-10);
  gp.psi1 = SymmetricState(n, std::move(r.vectors[1]), 1e-10);
  return gp;
}

double ground_gap(const TridiagonalOperator& t) {
  if (t.dim() < 2) throw std::invalid_argument("ground_gap needs dim >= 2");
  const std::vector<double> v = lowest_values(t, 2);
  return std::max(0.0, v[1] - v[0]);
}

}  // namespace adiabatic
