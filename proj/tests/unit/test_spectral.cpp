#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "doctest.h"

#include "adiabatic/eigensolver.hpp"
#include "adiabatic/meanfield.hpp"
#include "adiabatic/model.hpp"
#include "adiabatic/spectral.hpp"

using namespace adiabatic;

namespace {

std::vector<double> grid(int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = static_cast<double>(i) / (count - 1);
  return g;
}

}  // namespace

TEST_CASE("single qubit minimum gap") {
  const MinGap m = min_gap(1, 2.0);
  CHECK(std::abs(m.s_star - 0.5) < 1e-8);
  CHECK(std::abs(m.gap - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("separable minimum gap") {
  for (int n : {50, 100}) {
    const MinGap m = min_gap(n, 0.0);
    CHECK(std::abs(m.s_star - 0.5) < 1e-8);
    CHECK(std::abs(m.gap * n * std::sqrt(2.0) - 1.0) < 1e-10);
  }
}

TEST_CASE("gap curve matches the separable closed form") {
  const auto c = gap_curve(20, 0.0, grid(11));
  for (std::size_t i = 0; i < c.s.size(); ++i) CHECK(std::abs(c.gap[i] - std::hypot(c.s[i], 1.0 - c.s[i]) / 20) < 1e-12);
}

TEST_CASE("large alpha closes the gap faster than halving") {
  CHECK(min_gap(20, 10.0).gap / min_gap(10, 10.0).gap < 0.25);
}

TEST_CASE("minimum location drifts toward the mean-field line") {
  const double s_mf = transition_line(5.0).s_c;
  double previous = 1.0;
  for (int n : {20, 40, 80, 160}) {
    const double distance = std::abs(min_gap(n, 5.0).s_star - s_mf);
    CHECK(distance < previous);
    previous = distance;
  }
}

TEST_CASE("scaling fits recover planted laws") {
  const std::vector<int> n{10, 20, 40, 80, 160};
  std::vector<MinGap> power, expo;
  for (int k : n) {
    power.push_back({0.5, 3.0 * std::pow(k, -1.4)});
    expo.push_back({0.5, 2.0 * std::exp(-0.07 * k)});
  }
  const auto fp = fit_gap_scaling(n, power);
  CHECK(fp.model_kind == ScalingModel::power);
  CHECK(fp.exponent == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(fp.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fp.residual < 1e-12);
  const auto fe = fit_gap_scaling(n, expo);
  CHECK(fe.model_kind == ScalingModel::exponential);
  CHECK(fe.exponent == doctest::Approx(0.07).epsilon(1e-12));
  CHECK(fe.power.residual > 0.0);
}

TEST_CASE("separable gap scaling") {
  const auto fit = gap_scaling(0.0, {100, 200, 400, 700, 1000});
  CHECK(fit.model_kind == ScalingModel::power);
  CHECK(std::abs(fit.exponent - 1.0) < 0.05);
  const auto again = gap_scaling(0.0, {100, 200, 400, 700, 1000});
  CHECK(again.exponent == fit.exponent);
}

TEST_CASE("gap scaling input checks") {
  CHECK_THROWS_AS(gap_scaling(0.0, {10, 20, 30}), std::invalid_argument);
  CHECK_THROWS_AS(gap_scaling(0.0, {10, 30, 20, 40}), std::invalid_argument);
  CHECK_THROWS_AS(min_gap(10, 1.0, {0.0, 200, 1}), std::invalid_argument);
}

TEST_CASE("s = 0 density as printed") {
  const int n = 40;
  CHECK(dos_s0_value(n, 0.5) == doctest::Approx(2.0 * n / std::numbers::pi).epsilon(1e-15));
  for (double d : {0.01, 0.1, 0.3}) CHECK(dos_s0_value(n, 0.5 + d) == doctest::Approx(dos_s0_value(n, 0.5 - d)));
  const auto c = dos_s0_analytic(n, grid(101));
  CHECK(std::max_element(c.density.begin(), c.density.end()) - c.density.begin() == 50);
}

TEST_CASE("s = 1 densities") {
  for (double a : {0.5, 2.0, 7.0})
    CHECK(dos_s1_sector_value(a, 0.0) == doctest::Approx(1.0 / (a * (1.0 + 1.0 / std::tanh(a)))).epsilon(1e-14));
  // alpha -> 0 recovers the s = 0 Gaussian shape.
  for (double w : {0.2, 0.45, 0.5, 0.8})
    CHECK(dos_s1_full_value(60, 1e-9, w) == doctest::Approx(dos_s0_value(60, w)).epsilon(1e-7));

  // Mean level moves toward omega = 1 with alpha.
  double previous = 0.0;
  for (double a : {0.5, 1.5, 3.0, 6.0}) {
    const auto edges = grid(201);
    const auto mass = analytic_bin_masses(DosKind::analytic_s1_full, 100, a, edges);
    double mean = 0.0;
    for (std::size_t b = 0; b < mass.size(); ++b) mean += mass[b] * 0.5 * (edges[b] + edges[b + 1]);
    CHECK(mean > previous);
    previous = mean;
  }
  CHECK_THROWS_AS(dos_s1_sector_value(kInfiniteAlpha, 1.0), std::domain_error);
}

TEST_CASE("empirical histograms") {
  const auto inf = dos_empirical(10, kInfiniteAlpha, 1, 20);
  CHECK(inf.total == 1024.0);
  CHECK(inf.counts.back() == 1023.0);
  CHECK(inf.counts.front() == 1.0);

  const auto s0 = dos_empirical(10, 0.0, 0, 11);
  for (int q = 0; q <= 10; ++q) {
    // Bin width 1/11 puts level q/10 alone in bin q.
    CHECK(s0.counts[q] == binomial(10, q));
  }
  const auto s1 = dos_empirical(16, 2.0, 1, 30);
  CHECK(std::accumulate(s1.counts.begin(), s1.counts.end(), 0.0) == 65536.0);
  double mass = 0.0;
  for (std::size_t b = 0; b < s1.curve.density.size(); ++b) mass += s1.curve.density[b] * (s1.edges[b + 1] - s1.edges[b]);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(dos_empirical(10, 1.0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(dos_empirical(10, 1.0, 2, 10), std::invalid_argument);
}

TEST_CASE("analytic bin masses are normalized") {
  const auto edges = grid(26);
  for (DosKind k : {DosKind::analytic_s0, DosKind::analytic_s1_full, DosKind::analytic_s1_sector}) {
    const auto m = analytic_bin_masses(k, 80, 1.5, edges);
    CHECK(std::accumulate(m.begin(), m.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("anti-crossings") {
  const auto g = grid(401);
  CHECK(anticrossing_scan(30, 0.0, 3, g).empty());

  const auto ac = anticrossing_scan(30, 5.0, 3, g);
  const Cascade c = ground_cascade(ac);
  CHECK(c.complete());
  const MinGap m = min_gap(30, 5.0);
  for (const auto& x : ac)
    if (x.lower_level == 0) {
      CHECK(std::abs(x.s - m.s_star) < 1e-6);
      CHECK(x.gap == doctest::Approx(m.gap).epsilon(1e-8));
    }
}

TEST_CASE("s = 1 histogram comparison") {
  const auto c = dos_compare_s1(200, 1.0, 25);
  CHECK(c.empirical_mass.size() == 25);
  CHECK(std::accumulate(c.empirical_mass.begin(), c.empirical_mass.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c.discrepancy >= 0.0);
  CHECK(c.discrepancy < 0.1);
  CHECK_THROWS_AS(dos_compare_s1(20, kInfiniteAlpha, 25), std::invalid_argument);
}
