#include "steer/verify.hpp"

#include <algorithm>
#include <cmath>

#include "steer/capacity.hpp"
#include "steer/lhs.hpp"
#include "steer/qops.hpp"
#include "steer/radii.hpp"
#include "steer/random.hpp"

namespace steer::verify {

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    stat = std::max({stat, (i + 1) / n - f, f - i / n});
  }
  return stat;
}

namespace {

using radii::FamilyKind;
using radii::StateFamily;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Largest |estimate - target| / standard error over entries, real and imaginary
// parts separately. Entries with zero error must match to 1e-12.
double max_z(const Matrix& est, const Matrix& se, const Matrix& target) {
  double z = 0.0;
  for (Eigen::Index i = 0; i < est.rows(); ++i) {
    for (Eigen::Index j = 0; j < est.cols(); ++j) {
      const double dr = std::abs(est(i, j).real() - target(i, j).real());
      const double di = std::abs(est(i, j).imag() - target(i, j).imag());
      z = std::max(z, se(i, j).real() > 0.0 ? dr / se(i, j).real() : (dr > 1e-12 ? HUGE_VAL : 0.0));
      z = std::max(z, se(i, j).imag() > 0.0 ? di / se(i, j).imag() : (di > 1e-12 ? HUGE_VAL : 0.0));
    }
  }
  return z;
}

class Suite {
 public:
  explicit Suite(Report& r) : report_(r) {}

  void at_most(std::string module, std::string property, double residual, double threshold) {
    report_.checks.push_back({std::move(module), std::move(property), residual, threshold, residual <= threshold});
  }

  void above(std::string module, std::string property, double residual, double threshold) {
    report_.checks.push_back({std::move(module), std::move(property), residual, threshold, residual > threshold});
  }

 private:
  Report& report_;
};

void qops_suite(Suite& suite, RandomStream& rng, std::size_t samples) {
  {
    const BipartiteState rho = random_bipartite_state(3, 3, rng);
    const auto povm = random_rank_one_povm(3, 4, rng);
    const HermitianOperator e = povm[0];
    const HermitianOperator rest(Matrix::Identity(3, 3) - e.matrix());
    const Matrix sum = conditional_state(rho, e).matrix() + conditional_state(rho, rest).matrix();
    suite.at_most("qops", "conditional_state linearity", max_abs(sum - rho.marginal_b()), 1e-12);
  }
  {
    double worst = 0.0;
    for (std::size_t d = 2; d <= 6; ++d) {
      const double eta = rng.uniform();
      const Matrix mixed = Matrix::Identity(d, d) / static_cast<double>(d);
      worst = std::max(worst, max_abs(werner_state(d, eta).marginal_b() - mixed));
      worst = std::max(worst, max_abs(isotropic_state(d, eta).marginal_b() - mixed));
    }
    suite.at_most("qops", "family marginals equal 1/d", worst, 1e-12);
  }
  {
    const std::size_t d = 3;
    const Matrix u = haar_unitary(d, rng);
    const Matrix uu = kron(u, u);
    const Matrix uuc = kron(u, u.conjugate());
    const Matrix w = werner_state(d, 0.7).matrix();
    const Matrix s = isotropic_state(d, 0.7).matrix();
    const double res = std::max(max_abs(uu * w * uu.adjoint() - w), max_abs(uuc * s * uuc.adjoint() - s));
    suite.at_most("qops", "unitary covariance of Werner/isotropic states", res, 1e-10);
  }
  {
    const std::size_t d = 4;
    std::vector<double> t;
    t.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      const Vector v = haar_state_sample(d, rng);
      t.push_back(std::norm(v(0)) + std::norm(v(1)));
    }
    const double ks = ks_statistic(std::move(t), [](double x) { return capacity::reg_inc_beta(x, 2.0, 2.0); });
    suite.at_most("qops", "Haar overlap with rank-2 projection ~ Beta(2,2) (KS)", ks,
                  std::max(0.01, 1.95 / std::sqrt(static_cast<double>(samples))));
  }
}

void capacity_suite(Suite& suite, RandomStream& rng, std::size_t samples) {
  const capacity::MomentBody body(5, 2);
  const capacity::MomentBody dual(5, 3);
  const double cap = body.cap();
  double sym = 0.0;
  int duality_mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const capacity::PlanePoint p{cap * rng.uniform(), cap * rng.uniform()};
    const double m = capacity::membership_margin(body, p);
    sym = std::max(sym, std::abs(m - capacity::membership_margin(body, {cap - p.u, cap - p.v})));
    // Margins are measured along v, so only membership is compared here.
    const double md = capacity::membership_margin(dual, {p.v, p.u});
    if (std::abs(m) > 1e-9 && std::abs(md) > 1e-9 && (m >= 0.0) != (md >= 0.0)) ++duality_mismatches;
  }
  suite.at_most("capacity", "complement symmetry (margin difference)", sym, 1e-10);
  suite.at_most("capacity", "rank-complement duality (membership mismatches)", duality_mismatches, 0.0);

  int failures = 0;
  for (int k = 1; k < 20; ++k) {
    const capacity::PlanePoint p = capacity::threshold_point_lower(body, k / 20.0);
    if (!capacity::contains(body, p)) ++failures;
    if (capacity::contains(body, {p.u, p.v + 1e-6})) ++failures;
  }
  suite.at_most("capacity", "threshold points on the boundary", failures, 0.0);

  // Haar Monte Carlo of int g(l) |l><l| for g = 1{t <= 1/3}, d = 3, r = 1.
  const capacity::MomentBody b31(3, 1);
  const double c = 1.0 / 3.0;
  double su = 0.0, su2 = 0.0, sv = 0.0, sv2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vector v = haar_state_sample(3, rng);
    const double t = std::norm(v(0));
    const double g = t <= c ? 1.0 : 0.0;
    su += g * t;
    su2 += g * t * t;
    sv += g * (1.0 - t) / 2.0;
    sv2 += g * (1.0 - t) * (1.0 - t) / 4.0;
  }
  const double n = static_cast<double>(samples);
  const double mu = su / n, mv = sv / n;
  const double se_u = std::sqrt((su2 / n - mu * mu) / (n - 1.0));
  const double se_v = std::sqrt((sv2 / n - mv * mv) / (n - 1.0));
  const capacity::PlanePoint p = capacity::threshold_point_lower(b31, c);
  const double z = std::max(std::abs(p.u - mu) / se_u, std::abs(p.v - mv) / se_v);
  suite.at_most("capacity", "threshold moments match Haar Monte Carlo (z-score)", z, 4.0);
}

void radii_suite(Suite& suite) {
  double worst = 0.0;
  for (int d = 2; d <= 20; ++d) {
    for (FamilyKind k : {FamilyKind::Werner, FamilyKind::Isotropic}) {
      const StateFamily f(k, d);
      worst = std::max(worst, std::abs(radii::critical_radius_rank(f, 1) - radii::closed_form_r2(f)));
    }
  }
  suite.at_most("radii", "rank-1 solver matches closed form (d = 2..20)", worst, 1e-8);

  double min_gap = HUGE_VAL;
  for (int d = 3; d <= 100; ++d) {
    for (FamilyKind k : {FamilyKind::Werner, FamilyKind::Isotropic}) {
      const StateFamily f(k, d);
      min_gap = std::min(min_gap, radii::closed_form_r2(f) - radii::reference_thresholds(f).projective);
    }
  }
  suite.above("radii", "R2 - R_PVM > 0 (d = 3..100)", min_gap, 0.0);

  double qubit = 0.0;
  for (FamilyKind k : {FamilyKind::Werner, FamilyKind::Isotropic}) {
    const StateFamily f(k, 2);
    qubit = std::max(qubit, std::abs(radii::closed_form_r2(f) - radii::reference_thresholds(f).projective));
  }
  suite.at_most("radii", "R2 = R_PVM for qubits", qubit, 1e-12);

  int violations = 0;
  for (int d = 2; d <= 40; ++d) {
    for (FamilyKind k : {FamilyKind::Werner, FamilyKind::Isotropic}) {
      if (radii::critical_radius_dichotomic(StateFamily(k, d)).achieving_rank != 1) ++violations;
    }
  }
  suite.at_most("radii", "rank-1 effects minimize the radius (d = 2..40)", violations, 0.0);
}

void lhs_suite(Suite& suite, RandomStream& rng, std::size_t samples) {
  const std::size_t trials = std::min<std::size_t>(samples, 10000);
  double norm_err = 0.0;
  int range_violations = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::size_t d = 2 + i % 3;
    const auto effects = random_rank_one_povm(d, d * d, rng);
    const lhs::ResponseModel model(canonical_povm(effects));
    const std::vector<double> g = model.response(haar_state_sample(d, rng));
    double total = 0.0;
    for (double x : g) {
      total += x;
      if (x < 0.0 || x > 1.0) ++range_violations;
    }
    norm_err = std::max(norm_err, std::abs(total - 1.0));
  }
  suite.at_most("lhs", "response normalization", norm_err, 1e-12);
  suite.at_most("lhs", "response range [0, 1] violations", range_violations, 0.0);

  double eq8 = 0.0;
  for (int d = 2; d <= 20; ++d) eq8 = std::max(eq8, std::abs(lhs::realized_eta(d) - lhs::povm_lower_bound_werner(d)));
  suite.at_most("lhs", "realized eta equals the POVM lower bound (d = 2..20)", eq8, 1e-10);

  const std::size_t d = 3;
  const lhs::ResponseModel model(canonical_povm(random_rank_one_povm(d, d * d, rng)));
  const double eta = lhs::povm_lower_bound_werner(3);
  const lhs::Assemblage asm_ = lhs::reconstruct_assemblage(model, lhs::MonteCarlo{samples, rng.engine()(), 16});
  const BipartiteState w = werner_state(d, eta);
  double z = 0.0;
  for (std::size_t a = 0; a < model.outcomes(); ++a) {
    const RankOneEffect& e = model.povm()[a];
    const Matrix target = conditional_state(w, HermitianOperator(e.weight * e.projector())).matrix();
    z = std::max(z, max_z(asm_.conditionals[a], asm_.std_errors[a], target));
  }
  suite.at_most("lhs", "reconstructed assemblage matches Werner conditionals (max z-score)", z, 5.0);
}

}  // namespace

Report run_all(std::uint64_t seed, std::size_t samples) {
  Report report;
  report.seed = seed;
  report.samples = samples;
  Suite suite(report);
  const RandomStream root(seed);
  RandomStream q = root.split(0);
  RandomStream c = root.split(1);
  RandomStream l = root.split(2);
  qops_suite(suite, q, samples);
  capacity_suite(suite, c, samples);
  radii_suite(suite);
  lhs_suite(suite, l, samples);
  return report;
}

}  // namespace steer::verify
