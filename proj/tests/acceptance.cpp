// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "steer/capacity.hpp"
#include "steer/cli.hpp"
#include "steer/criteria.hpp"
#include "steer/lhs.hpp"
#include "steer/parallel.hpp"
#include "steer/radii.hpp"

using namespace steer;
using radii::FamilyKind;
using radii::StateFamily;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

constexpr FamilyKind kFamilies[] = {FamilyKind::Werner, FamilyKind::Isotropic};

Outcome closed_forms() {
  auto row = [](FamilyKind kind) {
    cli::RunConfig c;
    c.command = cli::Command::Radii;
    c.format = cli::OutputFormat::Json;
    c.families = {kind};
    c.d_min = c.d_max = 3;
    std::ostringstream out;
    cli::radii_table(c, out);
    return nlohmann::json::parse(out.str())["rows"][0];
  };
  const auto w = row(FamilyKind::Werner);
  const auto s = row(FamilyKind::Isotropic);
  const double w_ref = 4.0 * (1.0 - std::sqrt(2.0 / 3.0));
  const double s_ref = 1.0 - 1.0 / std::sqrt(3.0);
  const double rw = w["R2_closed_form"], rs = s["R2_closed_form"];
  const double sw = w["R2_solver"], ss = s["R2_solver"];
  const double pw = w["R_PVM"], ps = s["R_PVM"];
  const bool ok = std::abs(rw - w_ref) < 1e-6 && std::abs(sw - w_ref) < 1e-6 && std::abs(rs - s_ref) < 1e-6 &&
                  std::abs(ss - s_ref) < 1e-6 && std::abs(pw - 2.0 / 3.0) < 1e-12 && std::abs(ps - 5.0 / 12.0) < 1e-12;
  return {ok, fmt("R2(W3)=%.7f [4(1-sqrt(2/3))=%.7f], R2(S3)=%.7f [1-1/sqrt3=%.7f], R_PVM=%.6f/%.6f", rw, w_ref, rs,
                  s_ref, pw, ps)};
}

Outcome solver_equivalence() {
  double worst = 0.0;
  for (int d = 2; d <= 50; ++d) {
    for (FamilyKind k : kFamilies) {
      const StateFamily f(k, d);
      worst = std::max(worst, std::abs(radii::critical_radius_rank(f, 1) - radii::closed_form_r2(f)));
    }
  }
  return {worst < 1e-8, fmt("max |solver - closed form| = %.2e over d=2..50", worst)};
}

Outcome strict_separation() {
  double min_gap = HUGE_VAL;
  for (int d = 3; d <= 100; ++d) {
    for (FamilyKind k : kFamilies) {
      const StateFamily f(k, d);
      min_gap = std::min(min_gap, radii::critical_radius_dichotomic(f).value - radii::reference_thresholds(f).projective);
    }
  }
  const double gw = radii::closed_form_r2({FamilyKind::Werner, 3}) - 2.0 / 3.0;
  const double gs = radii::closed_form_r2({FamilyKind::Isotropic, 3}) - 5.0 / 12.0;
  const bool ok = min_gap > 0.0 && std::abs(gw - 0.0673) < 1e-4 && std::abs(gs - 0.00598) < 1e-4;
  return {ok, fmt("min gap %.3e over d=3..100; d=3 gaps %.5f (W), %.5f (S)", min_gap, gw, gs)};
}

Outcome qubit_collapse() {
  double worst = 0.0;
  for (FamilyKind k : kFamilies) {
    const StateFamily f(k, 2);
    worst = std::max(worst, std::abs(radii::closed_form_r2(f) - radii::reference_thresholds(f).projective));
  }
  return {worst < 1e-12, fmt("max |R2 - R_PVM| at d=2: %.1e", worst)};
}

Outcome realized_eta() {
  double worst = 0.0;
  for (int d = 2; d <= 20; ++d) {
    const long double dd = d;
    const long double ref = (1.0L + std::pow(dd - 1.0L, dd + 1.0L) * std::pow(dd, -dd)) / (dd + 1.0L);
    worst = std::max(worst, static_cast<double>(std::abs(lhs::realized_eta(d) - ref)));
  }
  const double big = lhs::realized_eta(10000);
  const double off = std::abs(big - 1.0 / std::numbers::e);
  return {worst < 1e-10 && off < 1e-4,
          fmt("max deviation d=2..20: %.1e; eta(10^4)=%.7f, |eta - 1/e| = %.1e", worst, big, off)};
}

Outcome assemblage_fidelity() {
  RandomStream rng(6001);
  double worst_z = 0.0;
  int povms = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t d = i < 10 ? 2 : 3;
    const std::size_t n = d + 1 + static_cast<std::size_t>(i % 3);
    const std::size_t rank = 1 + static_cast<std::size_t>(i % 2) * (d - 1);
    std::vector<HermitianOperator> effects;
    for (const Matrix& m : oracle::random_povm(d, n, std::min(rank, d), rng)) effects.emplace_back(m);
    const lhs::ResponseModel model(canonical_povm(effects));
    const lhs::Assemblage a = lhs::reconstruct_assemblage(model, lhs::MonteCarlo{1000000, 9000u + i, 16});
    const Matrix w = oracle::werner(d, lhs::povm_lower_bound_werner(static_cast<int>(d)));
    auto zscore = [&](const Matrix& est, const Matrix& se, const Matrix& target) {
      for (Eigen::Index r = 0; r < est.rows(); ++r) {
        for (Eigen::Index c = 0; c < est.cols(); ++c) {
          const Complex diff = est(r, c) - target(r, c);
          for (auto [dv, sv] : {std::pair{diff.real(), se(r, c).real()}, std::pair{diff.imag(), se(r, c).imag()}}) {
            if (sv > 0.0) {
              worst_z = std::max(worst_z, std::abs(dv) / sv);
            } else if (std::abs(dv) > 1e-14) {
              worst_z = HUGE_VAL;
            }
          }
        }
      }
    };
    for (std::size_t k = 0; k < model.outcomes(); ++k) {
      const RankOneEffect& e = model.povm()[k];
      zscore(a.conditionals[k], a.std_errors[k], oracle::conditional(w, e.weight * e.projector(), d, d));
    }
    for (std::size_t k = 0; k < effects.size(); ++k) {
      zscore(a.coarse[k], a.coarse_std_errors[k], oracle::conditional(w, effects[k].matrix(), d, d));
    }
    ++povms;
  }
  return {worst_z < 5.0, fmt("%d POVMs, 10^6 samples each; max z-score %.2f (refined and coarse)", povms, worst_z)};
}

Outcome response_validity() {
  RandomStream rng(6002);
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 4);
    std::vector<HermitianOperator> effects;
    for (const Matrix& m : oracle::random_povm(d, d + 1 + i % 5, 1 + i % 2, rng)) effects.emplace_back(m);
    const lhs::ResponseModel model(canonical_povm(effects));
    double sum = 0.0;
    for (double g : model.response(haar_state_sample(d, rng))) {
      sum += g;
      violations += (g < 0.0 || g > 1.0);
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return {worst <= 1e-12 && violations == 0,
          fmt("10^4 inputs: max |sum G - 1| = %.1e, range violations %d", worst, violations)};
}

Outcome capacity_oracles() {
  RandomStream rng(6003);
  double worst_z = 0.0, worst_lp = 0.0;
  for (auto [d, r] : {std::pair{3, 1}, std::pair{4, 1}, std::pair{4, 2}, std::pair{5, 2}}) {
    const capacity::MomentBody body(d, r);
    const double c = static_cast<double>(r) / d;
    for (bool lower : {true, false}) {
      const capacity::PlanePoint p =
          lower ? capacity::threshold_point_lower(body, c) : capacity::threshold_point_upper(body, c);
      const oracle::Point m = oracle::haar_threshold_moments(d, r, c, lower, 1000000, rng);
      worst_z = std::max({worst_z, std::abs(p.u - m.u) / m.se_u, std::abs(p.v - m.v) / m.se_v});
      worst_lp = std::max(worst_lp, std::abs(p.v - oracle::lp_v_extreme(d, r, p.u, lower)));
    }
  }
  return {worst_z < 3.0 && worst_lp < 1e-4,
          fmt("max Monte Carlo z-score %.2f (10^6 samples), max LP deviation %.1e", worst_z, worst_lp)};
}

Outcome conjecture_scan() {
  std::vector<std::pair<FamilyKind, int>> jobs;
  for (FamilyKind k : kFamilies)
    for (int d = 2; d <= 1000; ++d) jobs.emplace_back(k, d);
  std::vector<int> argmin(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto& [k, d] = jobs[jobs.size() - 1 - i];
    argmin[jobs.size() - 1 - i] = radii::critical_radius_dichotomic({k, d}).achieving_rank;
  });
  int flagged = 0;
  for (int a : argmin) flagged += a != 1;
  return {flagged == 0, fmt("%zu (family, d) pairs, d <= 1000; argmin != 1 in %d", jobs.size(), flagged)};
}

Outcome sdp_sanity() {
  RandomStream rng(6004);
  double worst_self = 1.0;
  for (std::size_t d : {2u, 3u, 2u, 3u, 3u}) {
    const BipartiteState rho = criteria::normalize_bob_marginal(random_bipartite_state(d, d, rng));
    worst_self = std::min(worst_self, criteria::degradation_radius(rho, rho));
  }
  const double product = criteria::degradation_radius(isotropic_state(3, 1.0), isotropic_state(3, 0.0));
  const double iso = criteria::degradation_radius(isotropic_state(3, 1.0), isotropic_state(3, 0.4));
  const bool ok = worst_self >= 1.0 - 1e-6 && product <= 1e-6 && iso >= 0.4 - 1e-6;
  return {ok, fmt("min D(rho,rho)=%.7f; D(S3, noise)=%.1e; D(S3, S3_0.4)=%.7f", worst_self, product, iso)};
}

Outcome twirling_tightness() {
  double worst = 0.0;
  double printed_gap = 0.0;
  for (int d = 2; d <= 5; ++d) {
    const double r2w = radii::closed_form_r2({FamilyKind::Werner, d});
    const double r2s = radii::closed_form_r2({FamilyKind::Isotropic, d});
    const BipartiteState w = werner_state(d, 1.0);
    const double b = criteria::steerability_upper_bound(w, r2w, r2s, criteria::IsotropicDenominator::Twirled);
    worst = std::max(worst, std::abs(b - r2w));
    printed_gap = std::max(printed_gap, std::abs(criteria::steerability_upper_bound(w, r2w, r2s) - r2w));
  }
  return {worst <= 1e-12,
          fmt("twirled denominator: max |bound(W_1) - R2(W)| = %.1e for d=2..5 "
              "(printed denominator gives max gap %.3f)",
              worst, printed_gap)};
}

Outcome hierarchy() {
  int violations = 0;
  for (int d = 2; d <= 100; ++d) {
    const radii::HierarchyReport rep = radii::hierarchy_check({FamilyKind::Werner, d});
    for (const auto& c : rep.comparisons) violations += !c.holds;
  }
  return {violations == 0, fmt("Werner d=2..100: %d ordering violations", violations)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form reproduction", 1.0, closed_forms},
      {2, "solver/formula equivalence", 10.0, solver_equivalence},
      {3, "strict separation", 60.0, strict_separation},
      {4, "two-qubit collapse", 1.0, qubit_collapse},
      {5, "realized eta consistency", 5.0, realized_eta},
      {6, "LHS assemblage fidelity", 120.0, assemblage_fidelity},
      {7, "response-function validity", 60.0, response_validity},
      {8, "capacity oracle equivalence", 120.0, capacity_oracles},
      {9, "conjecture scan d <= 1000", 300.0, conjecture_scan},
      {10, "SDP sanity", 120.0, sdp_sanity},
      {11, "twirling bound tightness", 1.0, twirling_tightness},
      {12, "hierarchy report", 60.0, hierarchy},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool ok = o.passed && in_time;
    failures += !ok;
    std::printf("[%s] %2d %-30s %s (%.2f s%s)\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : fmt(", budget %.0f s exceeded", c.budget_s).c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
