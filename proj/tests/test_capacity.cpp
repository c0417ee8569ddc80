#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "steer/capacity.hpp"

using namespace steer;
using namespace steer::capacity;

TEST_CASE("regularized incomplete beta agrees with boost") {
  const double shapes[] = {0.5, 1.0, 2.0, 3.5, 10.0, 47.0, 300.0, 2500.0, 99999.0};
  double worst = 0.0;
  for (double a : shapes) {
    for (double b : shapes) {
      for (int k = 1; k < 40; ++k) {
        const double mean = a / (a + b);
        // Concentrate probes around the mean, where large shapes have mass.
        const double x = std::clamp(mean + (k - 20) * 0.15 * std::sqrt(mean * (1 - mean) / (a + b + 1)) +
                                        (k % 7 == 0 ? (k - 20) / 40.0 : 0.0),
                                    1e-6, 1 - 1e-6);
        const double ref = oracle::ibeta(x, a, b);
        const double got = reg_inc_beta(x, a, b);
        const double comp = reg_inc_beta_complement(x, a, b);
        worst = std::max(worst, std::abs(got - ref));
        CHECK(std::abs(comp - (1.0 - ref)) < 1e-12);
      }
    }
  }
  CHECK(worst < 1e-12);
  CHECK(reg_inc_beta(0.0, 2.0, 3.0) == 0.0);
  CHECK(reg_inc_beta(1.0, 2.0, 3.0) == 1.0);
  CHECK_THROWS_AS(reg_inc_beta(1.5, 2.0, 3.0), std::domain_error);
  CHECK_THROWS_AS(reg_inc_beta(0.5, -1.0, 3.0), std::domain_error);
}

TEST_CASE("partial moments agree with quadrature of the Beta density") {
  for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{2.0, 3.0}, std::pair{1.0, 9.0}}) {
    for (double c : {0.1, 0.33, 0.8}) {
      for (auto [j, k] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}, std::pair{0, 2}}) {
        auto f = [&](double t) { return std::pow(t, j) * std::pow(1 - t, k) * oracle::beta_pdf(t, a, b); };
        CHECK(beta_partial_moment(c, a, b, j, k) == doctest::Approx(oracle::integrate(f, 0.0, c)).epsilon(1e-10));
        CHECK(beta_partial_moment_upper(c, a, b, j, k) ==
              doctest::Approx(oracle::integrate(f, c, 1.0)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("MomentBody validates its rank") {
  CHECK_THROWS_AS(MomentBody(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(MomentBody(3, 3), std::invalid_argument);
  CHECK(MomentBody(4, 2).cap() == doctest::Approx(0.25));
}

TEST_CASE("threshold points match Haar Monte Carlo and the discretized LP") {
  RandomStream rng(777);
  for (auto [d, r] : {std::pair{3, 1}, std::pair{4, 1}, std::pair{4, 2}, std::pair{5, 2}}) {
    const MomentBody body(d, r);
    for (double c : {0.25, 0.5}) {
      const PlanePoint lo = threshold_point_lower(body, c);
      const PlanePoint hi = threshold_point_upper(body, c);
      const oracle::Point mlo = oracle::haar_threshold_moments(d, r, c, true, 100000, rng);
      const oracle::Point mhi = oracle::haar_threshold_moments(d, r, c, false, 100000, rng);
      CHECK(std::abs(lo.u - mlo.u) < 4 * mlo.se_u);
      CHECK(std::abs(lo.v - mlo.v) < 4 * mlo.se_v);
      CHECK(std::abs(hi.u - mhi.u) < 4 * mhi.se_u);
      CHECK(std::abs(hi.v - mhi.v) < 4 * mhi.se_v);
      // Lower thresholds trace the upper boundary, upper thresholds the lower one.
      CHECK(std::abs(lo.v - oracle::lp_v_extreme(d, r, lo.u, true)) < 1e-4);
      CHECK(std::abs(hi.v - oracle::lp_v_extreme(d, r, hi.u, false)) < 1e-4);
    }
  }
}

TEST_CASE("v_range brackets the LP optimum across u") {
  for (auto [d, r] : {std::pair{3, 1}, std::pair{5, 2}}) {
    const MomentBody body(d, r);
    for (int k = 1; k < 10; ++k) {
      const double u = body.cap() * k / 10.0;
      const VRange range = v_range(body, u);
      CHECK(range.v_max == doctest::Approx(oracle::lp_v_extreme(d, r, u, true)).epsilon(1e-4));
      CHECK(range.v_min == doctest::Approx(oracle::lp_v_extreme(d, r, u, false)).epsilon(1e-4));
      CHECK(range.v_min <= range.v_max);
    }
    CHECK_THROWS_AS(v_max(body, -0.01), std::domain_error);
    CHECK_THROWS_AS(v_max(body, body.cap() + 0.01), std::domain_error);
  }
}

TEST_CASE("membership: corners, symmetry and rank duality") {
  const MomentBody body(5, 2);
  const MomentBody dual(5, 3);
  const double cap = body.cap();
  CHECK(contains(body, {0.0, 0.0}));
  CHECK(contains(body, {cap, cap}));
  CHECK_FALSE(contains(body, {cap, 0.0}));
  CHECK_FALSE(contains(body, {0.0, cap}));
  CHECK_FALSE(contains(body, {-1e-6, 0.0}));
  CHECK_FALSE(contains(body, {cap + 1e-6, cap}));

  RandomStream rng(31);
  for (int i = 0; i < 500; ++i) {
    const PlanePoint p{cap * rng.uniform(), cap * rng.uniform()};
    const double m = membership_margin(body, p);
    if (std::abs(m) < 1e-9) continue;
    CHECK(contains(body, p) == contains(body, {cap - p.u, cap - p.v}));
    CHECK(contains(body, p) == contains(dual, {p.v, p.u}));
  }
}

TEST_CASE("boundary points are in, points just outside are out") {
  const MomentBody body(4, 1);
  for (int k = 1; k < 20; ++k) {
    const PlanePoint lo = threshold_point_lower(body, k / 20.0);
    const PlanePoint hi = threshold_point_upper(body, k / 20.0);
    CHECK(contains(body, lo));
    CHECK(contains(body, hi));
    CHECK_FALSE(contains(body, {lo.u, lo.v + 1e-7}));
    CHECK_FALSE(contains(body, {hi.u, hi.v - 1e-7}));
  }
}
