#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "doctest.h"

#include "adiabatic/eigensolver.hpp"
#include "adiabatic/model.hpp"

using namespace adiabatic;

namespace {

Eigen::MatrixXd dense(const TridiagonalOperator& t) {
  const auto d = static_cast<Eigen::Index>(t.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = t.diag[i];
  for (Eigen::Index i = 0; i + 1 < d; ++i) m(i, i + 1) = m(i + 1, i) = t.offdiag[i];
  return m;
}

TridiagonalOperator random_tridiagonal(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TridiagonalOperator t;
  for (std::size_t i = 0; i < dim; ++i) t.diag.push_back(u(rng));
  for (std::size_t i = 0; i + 1 < dim; ++i) t.offdiag.push_back(u(rng));
  return t;
}

double residual(const TridiagonalOperator& t, const std::vector<double>& v, double lambda) {
  const auto tv = t.apply(v);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(tv[i] - lambda * v[i]));
  return r;
}

}  // namespace

TEST_CASE("trivial and 2x2 spectra") {
  TridiagonalOperator one{{0.3}, {}};
  CHECK(eigen_all(one).values == std::vector<double>{0.3});

  const auto e = eigen_all(build_hs({1, 2.0, 0.5})).values;
  CHECK(e[0] == doctest::Approx(0.5 - std::sqrt(2.0) / 4).epsilon(1e-15));
  CHECK(e[1] == doctest::Approx(0.5 + std::sqrt(2.0) / 4).epsilon(1e-15));
}

TEST_CASE("agrees with a dense solver on random input") {
  std::mt19937_64 rng(7);
  for (std::size_t dim : {2u, 3u, 17u, 64u, 150u}) {
    const auto t = random_tridiagonal(rng, dim);
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense(t)).eigenvalues();
    const auto ql = eigen_all(t, true);
    const auto bis = lowest_values(t, dim);
    const double scale = t.norm_inf();
    for (std::size_t i = 0; i < dim; ++i) {
      CHECK(std::abs(ql.values[i] - ref(i)) < 1e-12 * scale);
      CHECK(std::abs(bis[i] - ref(i)) < 1e-12 * scale);
      CHECK(residual(t, ql.vectors[i], ql.values[i]) < 1e-10 * scale);
    }
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < dim; ++k) dot += ql.vectors[i][k] * ql.vectors[j][k];
        CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("inverse iteration pairs are orthonormal on near-degenerate levels") {
  // Deep in the projector regime the two lowest levels are split by ~1e-14.
  const auto t = build_hs({60, 12.0, 0.45});
  const auto p = lowest_pairs(t, 4);
  const double scale = t.norm_inf();
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(residual(t, p.vectors[i], p.values[i]) < 1e-10 * scale);
    for (std::size_t j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < t.dim(); ++k) dot += p.vectors[i][k] * p.vectors[j][k];
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
  }
}

TEST_CASE("sturm count brackets the spectrum") {
  const auto t = build_hs({40, 3.0, 0.3});
  const auto e = eigen_all(t).values;
  CHECK(sturm_count(t, e.front() - 1e-9) == 0);
  CHECK(sturm_count(t, e[10] + 1e-9) == 11);
  CHECK(sturm_count(t, 2.0) == 41);
}

TEST_CASE("gershgorin containment") {
  const auto t = build_hs({80, 4.0, 0.6});
  const auto e = eigen_all(t).values;
  for (double lambda : e) {
    bool inside = false;
    for (std::size_t i = 0; i < t.dim(); ++i) {
      double r = 0.0;
      if (i > 0) r += std::abs(t.offdiag[i - 1]);
      if (i + 1 < t.dim()) r += std::abs(t.offdiag[i]);
      inside = inside || std::abs(lambda - t.diag[i]) <= r + 1e-14;
    }
    CHECK(inside);
  }
}

TEST_CASE("ground pair closed forms") {
  const auto g1 = ground_pair(build_hs({1, 0.9, 0.5}));
  CHECK(g1.gap == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));

  const int n = 12;
  const auto g0 = ground_pair(build_hs({n, 3.0, 0.0}));
  CHECK(std::abs(g0.e0) < 1e-14);
  const auto x = polarized_x(n);
  for (int k = 0; k <= n; ++k) CHECK(std::abs(g0.psi0[k] - x[k]) < 1e-12);

  const auto g_end = ground_pair(build_hs({n, 3.0, 1.0}));
  CHECK(std::abs(g_end.e0) < 1e-15);
  CHECK(g_end.psi0[n] == 1.0);
  CHECK(g_end.gap == doctest::Approx(hp_level(n, 3.0, 1)).epsilon(1e-14));

  const auto t = build_hs({7, 2.0, 0.4});
  CHECK(ground_gap(t) == doctest::Approx(ground_pair(t).gap).epsilon(1e-13));
}

TEST_CASE("sign convention is deterministic") {
  const auto t = build_hs({25, 5.0, 0.31});
  const auto a = ground_pair(t);
  const auto b = ground_pair(t);
  for (std::size_t k = 0; k < a.psi0.size(); ++k) {
    CHECK(a.psi0[k] == b.psi0[k]);
    CHECK(a.psi1[k] == b.psi1[k]);
  }
  double first = 0.0;
  for (double v : a.psi0.amp())
    if (std::abs(v) > 1e-8) {
      first = v;
      break;
    }
  CHECK(first > 0.0);
}

TEST_CASE("rejects bad input") {
  TridiagonalOperator bad{{0.0, std::nan("")}, {1.0}};
  CHECK_THROWS_AS(eigen_all(bad), std::invalid_argument);
  CHECK_THROWS_AS(ground_pair(TridiagonalOperator{{1.0}, {}}), std::invalid_argument);
}
