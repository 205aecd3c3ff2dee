#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"

#include "adiabatic/eigensolver.hpp"
#include "adiabatic/model.hpp"

using namespace adiabatic;

TEST_CASE("h0 small n entries") {
  const auto h1 = build_h0(1);
  CHECK(h1.diag == std::vector<double>{0.5, 0.5});
  CHECK(h1.offdiag[0] == doctest::Approx(-0.5).epsilon(1e-15));

  const auto h2 = build_h0(2);
  for (double d : h2.diag) CHECK(d == 0.5);
  for (double o : h2.offdiag) CHECK(o == doctest::Approx(-std::sqrt(2.0) / 4).epsilon(1e-15));
}

TEST_CASE("h0 spectrum spans [0, 1]") {
  for (int n : {1, 2, 7, 40}) {
    const auto e = eigen_all(build_h0(n)).values;
    CHECK(std::abs(e.front()) < 1e-13);
    CHECK(std::abs(e.back() - 1.0) < 1e-13);
  }
}

TEST_CASE("hp diagonal limits") {
  for (double a : {0.3, 2.0, 50.0, 800.0}) {
    const auto hp = build_hp(1, a);
    CHECK(hp.diag[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hp.diag[1] == 0.0);
  }
  const auto h0 = build_hp(4, 0.0);
  const std::vector<double> expected{1.0, 0.75, 0.5, 0.25, 0.0};
  for (int k = 0; k <= 4; ++k) CHECK(h0.diag[k] == doctest::Approx(expected[k]).epsilon(1e-15));

  const auto hinf = build_hp(5, kInfiniteAlpha);
  for (int k = 0; k < 5; ++k) CHECK(hinf.diag[k] == 1.0);
  CHECK(hinf.diag[5] == 0.0);
  for (double o : hinf.offdiag) CHECK(o == 0.0);
}

TEST_CASE("hp matches the exponential form where it does not overflow") {
  const int n = 9;
  const double a = 3.7;
  const auto hp = build_hp(n, a);
  for (int k = 0; k <= n; ++k) {
    const double m = k - 0.5 * n;
    const double direct = (std::exp(a) - std::exp(2 * a * m / n)) / (2 * std::sinh(a));
    CHECK(hp.diag[k] == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("hp monotone decreasing in k") {
  for (double a : {0.1, 1.0, 10.0}) {
    const auto hp = build_hp(30, a);
    for (int k = 0; k < 30; ++k) CHECK(hp.diag[k] > hp.diag[k + 1]);
  }
  // Large alpha saturates to 1 in double precision away from the ground level.
  const auto hp = build_hp(30, 1000.0);
  for (int k = 0; k < 30; ++k) CHECK(hp.diag[k] >= hp.diag[k + 1]);
  CHECK(hp.diag[29] > hp.diag[30]);
}

TEST_CASE("hs endpoints and n = 1 midpoint") {
  const auto hs0 = build_hs({6, 2.0, 0.0});
  const auto h0 = build_h0(6);
  CHECK(hs0.diag == h0.diag);
  CHECK(hs0.offdiag == h0.offdiag);
  const auto hs1 = build_hs({6, 2.0, 1.0});
  CHECK(hs1.diag == build_hp(6, 2.0).diag);
  for (double o : hs1.offdiag) CHECK(o == 0.0);

  const auto mid = build_hs({1, 1.3, 0.5});
  CHECK(mid.diag[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(mid.diag[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(mid.offdiag[0] == doctest::Approx(-0.25).epsilon(1e-15));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(build_h0(0), std::invalid_argument);
  CHECK_THROWS_AS(build_hp(3, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_hs({3, 1.0, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(build_hs({3, std::nan(""), 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(SymmetricState(2, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SymmetricState(1, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("spectrum stays in [0, 1]") {
  for (int n : {1, 5, 33, 120})
    for (double a : {0.0, 0.7, 3.0, 25.0, kInfiniteAlpha})
      for (double s : {0.0, 0.2, 0.5, 0.77, 1.0}) {
        const auto e = eigen_all(build_hs({n, a, s})).values;
        CHECK(e.front() > -1e-13);
        CHECK(e.back() < 1.0 + 1e-13);
      }
}

TEST_CASE("separable limit has equally spaced levels") {
  for (int n : {3, 50, 200})
    for (double s : {0.1, 0.3, 0.5, 0.9}) {
      const auto e = eigen_all(build_hs({n, 0.0, s})).values;
      const double spacing = std::hypot(s, 1.0 - s) / n;
      for (int q = 0; q <= n; ++q) CHECK(std::abs(e[q] - (e[0] + q * spacing)) < 1e-10);
      // Single-qubit ground energy (1 - sqrt(s^2 + (1-s)^2)) / 2.
      CHECK(std::abs(e[0] - 0.5 * (1.0 - std::hypot(s, 1.0 - s))) < 1e-10);
    }
}

TEST_CASE("s = 1 levels and degeneracies") {
  const auto lv = level_energies_s1(12, 2.5);
  REQUIRE(lv.size() == 13);
  CHECK(lv[0].energy == 0.0);
  CHECK(lv[0].degeneracy == 1.0);
  double total = 0.0;
  for (const auto& l : lv) total += l.degeneracy;
  CHECK(total == 4096.0);
  CHECK(lv[5].degeneracy == 792.0);

  for (const auto& l : level_energies_s1(8, kInfiniteAlpha))
    CHECK(l.energy == (l.q == 0 ? 0.0 : 1.0));
  for (const auto& l : level_energies_s1(8, 0.0)) CHECK(l.energy == doctest::Approx(l.q / 8.0).epsilon(1e-15));
}

TEST_CASE("binomials") {
  CHECK(binomial(10, 3) == 120.0);
  CHECK(binomial(60, 30) == 118264581564861424.0);
  CHECK(binomial(5, 6) == 0.0);
  CHECK(log_binomial(1000, 500) == doctest::Approx(std::lgamma(1001.0) - 2 * std::lgamma(501.0)).epsilon(1e-12));
}

TEST_CASE("polarized states") {
  const auto x = polarized_x(10);
  double norm = 0.0;
  for (double a : x.amp()) norm += a * a;
  CHECK(std::abs(norm - 1.0) < 1e-14);
  CHECK(x[10] * x[10] == std::ldexp(1.0, -10));
  CHECK(x[5] == doctest::Approx(std::sqrt(252.0) / 32.0).epsilon(1e-15));

  const auto big = polarized_x(3000);
  norm = 0.0;
  for (double a : big.amp()) norm += a * a;
  CHECK(std::abs(norm - 1.0) < 1e-12);

  const auto z = polarized_z(4);
  CHECK(z[4] == 1.0);
  CHECK(z[0] == 0.0);
}
