#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "steer/lhs.hpp"

using namespace steer;
using namespace steer::lhs;

namespace {

// eta = d(d-1)(y - x) with x, y the truncated moments of t ~ Beta(1, d-1),
// integrated numerically.
double oracle_eta(int d) {
  const double c = 1.0 / d;
  auto pdf = [d](double t) { return (d - 1) * std::pow(1 - t, d - 2); };
  const double x = oracle::integrate([&](double t) { return t * (1 - t) * pdf(t); }, 0.0, c) / (d - 1);
  const double y = oracle::integrate([&](double t) { return (1 - t) * (1 - t) * pdf(t); }, 0.0, c) / ((d - 1.0) * (d - 1.0));
  return d * (d - 1.0) * (y - x);
}

Povm make_povm(std::size_t d, std::size_t n, std::size_t rank, RandomStream& rng) {
  std::vector<HermitianOperator> effects;
  for (const Matrix& m : oracle::random_povm(d, n, rank, rng)) effects.emplace_back(m);
  return canonical_povm(effects);
}

}  // namespace

TEST_CASE("realized eta matches the closed form and a quadrature oracle") {
  for (int d = 2; d <= 20; ++d) {
    const double expected = oracle_eta(d);
    CHECK(std::abs(realized_eta(d) - expected) < 1e-10);
    CHECK(std::abs(povm_lower_bound_werner(d) - expected) < 1e-10);
  }
  CHECK(povm_lower_bound_werner(2) == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  CHECK(std::abs(realized_eta(10000) - 1.0 / std::numbers::e) < 1e-4);
}

TEST_CASE("per-outcome realized eta is independent of the POVM") {
  RandomStream rng(4);
  const ResponseModel model(make_povm(3, 4, 1, rng));
  for (std::size_t a = 0; a < model.outcomes(); ++a) {
    CHECK(realized_eta(model, a) == doctest::Approx(realized_eta(3)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(realized_eta(model, model.outcomes()), std::out_of_range);
}

TEST_CASE("response function is a probability distribution") {
  RandomStream rng(8);
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < 3000; ++i) {
    const std::size_t d = 2 + i % 3;
    const ResponseModel model(make_povm(d, d + 1 + i % 4, 1 + i % 2, rng));
    const std::vector<double> g = model.response(haar_state_sample(d, rng));
    double sum = 0.0;
    for (double x : g) {
      sum += x;
      violations += (x < 0.0 || x > 1.0);
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  CHECK(violations == 0);
  CHECK(worst < 1e-12);
}

TEST_CASE("response rejects malformed hidden states") {
  RandomStream rng(1);
  const ResponseModel model(make_povm(3, 4, 1, rng));
  CHECK_THROWS_AS(model.response(Vector::Ones(3)), std::invalid_argument);
  CHECK_THROWS_AS(model.response(haar_state_sample(2, rng)), std::invalid_argument);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  double s0 = 0.0, s10 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s10 += w[i] * std::pow(x[i], 10);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s10 == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}

TEST_CASE("qubit quadrature reproduces the Werner assemblage") {
  RandomStream rng(21);
  const ResponseModel model(make_povm(2, 3, 1, rng));
  const Assemblage a = reconstruct_assemblage(model, Quadrature{400});
  const Matrix w = oracle::werner(2, povm_lower_bound_werner(2));
  for (std::size_t k = 0; k < model.outcomes(); ++k) {
    const RankOneEffect& e = model.povm()[k];
    const Matrix target = oracle::conditional(w, e.weight * e.projector(), 2, 2);
    CHECK((a.conditionals[k] - target).cwiseAbs().maxCoeff() < 2e-3);
  }
  CHECK_THROWS_AS(reconstruct_assemblage(ResponseModel(make_povm(3, 4, 1, rng)), Quadrature{10}),
                  std::invalid_argument);
}

TEST_CASE("Monte Carlo assemblage matches within five standard errors") {
  RandomStream rng(33);
  for (std::size_t d : {2u, 3u}) {
    const ResponseModel model(make_povm(d, d + 1, d - 1, rng));
    const Assemblage a = reconstruct_assemblage(model, MonteCarlo{200000, 5, 8});
    const Matrix w = oracle::werner(d, povm_lower_bound_werner(static_cast<int>(d)));
    CHECK(a.coarse.size() == d + 1);
    std::vector<Matrix> parent(model.povm().parent_count(), Matrix::Zero(d, d));
    for (const auto& e : model.povm().effects()) parent[e.parent] += e.weight * e.projector();
    for (std::size_t k = 0; k < parent.size(); ++k) {
      const Matrix target = oracle::conditional(w, parent[k], d, d);
      for (Eigen::Index i = 0; i < target.rows(); ++i) {
        for (Eigen::Index j = 0; j < target.cols(); ++j) {
          const Complex diff = a.coarse[k](i, j) - target(i, j);
          const Complex se = a.coarse_std_errors[k](i, j);
          CHECK(std::abs(diff.real()) <= 5.0 * se.real() + 1e-15);
          CHECK(std::abs(diff.imag()) <= 5.0 * se.imag() + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("Monte Carlo reconstruction is deterministic in the seed") {
  RandomStream rng(2);
  const ResponseModel model(make_povm(2, 3, 1, rng));
  const Assemblage a = reconstruct_assemblage(model, MonteCarlo{5000, 77, 4});
  const Assemblage b = reconstruct_assemblage(model, MonteCarlo{5000, 77, 4});
  const Assemblage c = reconstruct_assemblage(model, MonteCarlo{5000, 78, 4});
  CHECK((a.conditionals[0] - b.conditionals[0]).norm() == 0.0);
  CHECK((a.conditionals[0] - c.conditionals[0]).norm() > 0.0);
}
