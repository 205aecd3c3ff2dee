#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "adiabatic/dynamics.hpp"
#include "adiabatic/oracle.hpp"
#include "adiabatic/spectral.hpp"

using namespace adiabatic;
namespace o = adiabatic::oracle;

TEST_CASE("no evolution leaves the quench overlap") {
  for (int n : {1, 5, 20, 60}) {
    const auto r = evolve(n, 2.0, 0.0);
    CHECK(r.fidelity == std::ldexp(1.0, -n));
    CHECK(r.norm_drift < 1e-15);
  }
}

TEST_CASE("single qubit adiabatic run") {
  const auto r = evolve(1, 1.0, 100.0);
  CHECK(r.fidelity > 0.99);
  CHECK(r.norm_drift <= 1e-9);
}

TEST_CASE("fourth-order step convergence") {
  const double ref = evolve_fixed(6, 3.0, 30.0, 3200).fidelity;
  const double e1 = std::abs(evolve_fixed(6, 3.0, 30.0, 50).fidelity - ref);
  const double e2 = std::abs(evolve_fixed(6, 3.0, 30.0, 100).fidelity - ref);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("matches the dense propagator in any gauge") {
  for (int n : {3, 6, 8}) {
    const double alpha = 3.0, t = 25.0;
    // Same scheme on both sides, so agreement is to rounding at any step count.
    const int steps = 60;
    const double tri = evolve_fixed(n, alpha, t, steps).fidelity;
    o::SolutionMask alternating = o::SolutionMask::zeros(n);
    for (int k = 0; k < n; k += 2) alternating.bits[k] = 1;
    for (const auto& m : {o::SolutionMask::zeros(n), o::SolutionMask::ones(n), alternating}) {
      const Eigen::VectorXcd psi = o::evolve_full(n, alpha, m, t, steps);
      CHECK(std::abs(std::norm(psi(static_cast<Eigen::Index>(m.index()))) - tri) < 1e-8);
    }
  }
}

TEST_CASE("separable problems converge faster than the projector-like one") {
  const double t = 60.0;
  CHECK(evolve(6, 0.0, t).fidelity > evolve(6, 10.0, t).fidelity);
}

TEST_CASE("longer runs do better") {
  // T0 beyond the first crossing of fidelity 1/2.
  double t0 = 1.0;
  while (evolve(5, 2.0, t0).fidelity < 0.5) t0 *= 1.5;
  CHECK(evolve(5, 2.0, 10.0 * t0).fidelity > evolve(5, 2.0, t0).fidelity);
}

TEST_CASE("required time") {
  const auto rt = required_time_scan({2, 4, 6, 8}, 0.0, 0.9);
  for (std::size_t i = 1; i < rt.size(); ++i) CHECK(rt[i].t_star > rt[i - 1].t_star);
  for (const auto& r : rt) {
    CHECK(r.inverse_gap_sq == doctest::Approx(2.0 * r.n * r.n).epsilon(1e-6));
    CHECK(evolve(r.n, 0.0, r.t_star).fidelity >= 0.9);
  }
  const auto quick = required_time_scan({6}, 1.0, std::ldexp(1.0, -6) + 1e-6);
  CHECK(quick[0].t_star < 0.1);
  CHECK_THROWS_AS(required_time_scan({4}, 0.0, 1.0), std::invalid_argument);
  RequiredTimeOptions tight;
  tight.t_max = 4.0;
  CHECK_THROWS_WITH_AS(required_time_scan({8}, 0.0, 0.99, tight), doctest::Contains("bracket"), std::runtime_error);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(evolve(3, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve(3, 1.0, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(evolve(3, 1.0, INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(evolve_fixed(3, 1.0, 1.0, 0), std::invalid_argument);
}
