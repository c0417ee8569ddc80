#include "steer/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "steer/lhs.hpp"
#include "steer/parallel.hpp"
#include "steer/roots.hpp"
#include "steer/state_io.hpp"
#include "steer/verify.hpp"

namespace steer::cli {

namespace {

using json = nlohmann::ordered_json;
using radii::FamilyKind;
using radii::StateFamily;

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

bool is_matrix_level(Command c) { return c == Command::Bound; }

struct RadiiRow {
  int d = 0;
  double closed_form = 0.0;
  double solver = 0.0;
  double pvm = 0.0;
  std::optional<double> povm_lower;
  double separability = 0.0;
};

struct ScanRow {
  FamilyKind kind;
  int d = 0;
  radii::CriticalRadiusResult result;
};

std::size_t range_size(const RunConfig& c) { return static_cast<std::size_t>(c.d_max - c.d_min + 1); }

}  // namespace

Level parse_level(const std::string& text) {
  if (text == "2") return Level::Two;
  if (text == "pvm") return Level::Projective;
  throw std::invalid_argument("unknown measurement level '" + text + "' (expected 2 or pvm)");
}

std::string to_string(Level level) { return level == Level::Two ? "2" : "pvm"; }

void validate(const RunConfig& c) {
  const int upper = is_matrix_level(c.command) ? kMatrixDimMax : kScalarDimMax;
  if (c.command == Command::Radii || c.command == Command::ConjectureScan) {
    if (c.d_min < 2 || c.d_max > upper || c.d_min > c.d_max) {
      throw std::invalid_argument("dimension range must satisfy 2 <= d-min <= d-max <= " + std::to_string(upper));
    }
    if (c.families.empty()) throw std::invalid_argument("no state family selected");
  }
  if (c.command == Command::Verify && c.samples < 100) throw std::invalid_argument("verify needs at least 100 samples");
  if (c.command == Command::Bound && c.state_file.empty()) throw std::invalid_argument("bound needs --state");
  if (c.tolerances.feasibility && !(*c.tolerances.feasibility > 0.0)) {
    throw std::invalid_argument("feasibility tolerance must be positive");
  }
}

void radii_table(const RunConfig& c, std::ostream& out) {
  const FamilyKind kind = c.families.front();
  std::vector<RadiiRow> rows(range_size(c));
  parallel_for(rows.size(), [&](std::size_t i) {
    const StateFamily f(kind, c.d_min + static_cast<int>(i));
    const radii::ReferenceThresholds ref = radii::reference_thresholds(f);
    RadiiRow& row = rows[i];
    row.d = f.d;
    row.closed_form = radii::closed_form_r2(f);
    row.solver = radii::critical_radius_dichotomic(f).value;
    row.pvm = ref.projective;
    if (kind == FamilyKind::Werner) row.povm_lower = lhs::povm_lower_bound_werner(f.d);
    row.separability = ref.separability;
  });

  if (c.format == OutputFormat::Csv) {
    out << "# schema: " << kRadiiSchema << " family=" << radii::to_string(kind) << '\n';
    out << "d,R2_closed_form,R2_solver,R_PVM,POVM_lower_bound,S\n";
    for (const RadiiRow& r : rows) {
      out << r.d << ',' << num(r.closed_form) << ',' << num(r.solver) << ',' << num(r.pvm) << ','
          << (r.povm_lower ? num(*r.povm_lower) : "") << ',' << num(r.separability) << '\n';
    }
    return;
  }
  json doc;
  doc["schema"] = kRadiiSchema;
  doc["family"] = radii::to_string(kind);
  doc["rows"] = json::array();
  for (const RadiiRow& r : rows) {
    json row;
    row["d"] = r.d;
    row["R2_closed_form"] = r.closed_form;
    row["R2_solver"] = r.solver;
    row["R_PVM"] = r.pvm;
    row["POVM_lower_bound"] = r.povm_lower ? json(*r.povm_lower) : json(nullptr);
    row["S"] = r.separability;
    doc["rows"].push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

void conjecture_scan(const RunConfig& c, std::ostream& out) {
  std::vector<ScanRow> rows;
  for (FamilyKind kind : c.families) {
    for (int d = c.d_min; d <= c.d_max; ++d) rows.push_back({kind, d, {}});
  }
  // Large d first so the expensive items do not trail at the end.
  parallel_for(rows.size(), [&](std::size_t i) {
    ScanRow& row = rows[rows.size() - 1 - i];
    row.result = radii::critical_radius_dichotomic(StateFamily(row.kind, row.d));
  });

  std::size_t flagged = 0;
  for (const ScanRow& r : rows) flagged += r.result.achieving_rank != 1;

  if (c.format == OutputFormat::Csv) {
    out << "# schema: " << kScanSchema << '\n';
    out << "family,d,argmin_rank,R2,flagged,per_rank\n";
    for (const ScanRow& r : rows) {
      out << radii::to_string(r.kind) << ',' << r.d << ',' << r.result.achieving_rank << ','
          << num(r.result.value) << ',' << (r.result.achieving_rank != 1 ? 1 : 0) << ',';
      for (std::size_t k = 0; k < r.result.per_rank.size(); ++k) {
        out << (k ? ";" : "") << num(r.result.per_rank[k].second);
      }
      out << '\n';
    }
    return;
  }
  json doc;
  doc["schema"] = kScanSchema;
  doc["flagged"] = flagged;
  doc["rows"] = json::array();
  for (const ScanRow& r : rows) {
    json row;
    row["family"] = radii::to_string(r.kind);
    row["d"] = r.d;
    row["argmin_rank"] = r.result.achieving_rank;
    row["R2"] = r.result.value;
    row["flagged"] = r.result.achieving_rank != 1;
    json per = json::array();
    for (const auto& [rank, value] : r.result.per_rank) per.push_back({{"r", rank}, {"radius", value}});
    row["per_rank"] = std::move(per);
    doc["rows"].push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

bool verify_report(const RunConfig& c, std::ostream& out) {
  const verify::Report rep = verify::run_all(c.seed, c.samples);
  json doc;
  doc["seed"] = rep.seed;
  doc["samples"] = rep.samples;
  doc["passed"] = rep.passed();
  doc["checks"] = json::array();
  for (const verify::Check& ch : rep.checks) {
    doc["checks"].push_back({{"module", ch.module},
                             {"property", ch.property},
                             {"residual", ch.residual},
                             {"threshold", ch.threshold},
                             {"passed", ch.passed}});
  }
  out << doc.dump(2) << '\n';
  return rep.passed();
}

void bound_report(const RunConfig& c, std::ostream& out) {
  const BipartiteState raw = read_state_file(c.state_file);
  if (raw.dim_a() > kMatrixDimMax || raw.dim_b() > kMatrixDimMax) {
    throw std::invalid_argument("bound supports local dimensions up to " + std::to_string(kMatrixDimMax));
  }
  const BipartiteState rho = criteria::normalize_bob_marginal(raw);
  const int db = static_cast<int>(rho.dim_b());

  auto radius = [&](FamilyKind kind, int d) {
    const StateFamily f(kind, d);
    return c.level == Level::Two ? radii::closed_form_r2(f) : radii::reference_thresholds(f).projective;
  };
  const double anchor_eta = radius(c.anchor, db);
  const BipartiteState tau = c.anchor == FamilyKind::Werner ? werner_state(rho.dim_b(), anchor_eta)
                                                            : isotropic_state(rho.dim_b(), anchor_eta);
  const double tol = c.tolerances.feasibility.value_or(criteria::kDefaultFeasibilityTol);
  const criteria::DegradationResult deg = criteria::degradation_radius_detailed(rho, tau, tol);

  std::optional<double> upper;
  if (rho.dim_a() == rho.dim_b()) {
    const int d = static_cast<int>(rho.dim_a());
    upper = criteria::steerability_upper_bound(rho, radius(FamilyKind::Werner, d), radius(FamilyKind::Isotropic, d),
                                               c.isotropic_denominator);
  }

  const bool unsteerable = deg.eta >= 1.0;
  const bool steerable = upper && *upper < 1.0;
  std::string verdict = "inconclusive";
  if (unsteerable && steerable) {
    // Only reachable through the printed isotropic denominator.
    verdict = "conflicting bounds (lower >= 1 and upper < 1); see --isotropic-denominator";
  } else if (unsteerable) {
    verdict = "certified-unsteerable at level " + to_string(c.level);
  } else if (steerable) {
    verdict = "certified-steerable at level " + to_string(c.level);
  }

  if (c.format == OutputFormat::Json) {
    json doc;
    doc["dimA"] = rho.dim_a();
    doc["dimB"] = rho.dim_b();
    doc["level"] = to_string(c.level);
    doc["anchor"] = {{"family", radii::to_string(c.anchor)}, {"eta", anchor_eta}};
    doc["lower_bound"] = deg.eta;
    doc["witness_residual"] = deg.witness_residual;
    doc["upper_bound"] = !upper ? json(nullptr) : std::isinf(*upper) ? json("inf") : json(*upper);
    doc["verdict"] = verdict;
    out << doc.dump(2) << '\n';
    return;
  }
  out << "dims: " << rho.dim_a() << " x " << rho.dim_b() << '\n';
  out << "level: " << to_string(c.level) << '\n';
  out << "anchor: " << radii::to_string(c.anchor) << " at eta = " << num(anchor_eta) << '\n';
  out << "lower_bound: " << num(deg.eta) << " (witness residual " << num(deg.witness_residual) << ")\n";
  if (!upper) {
    out << "upper_bound: n/a (requires dimA == dimB)\n";
  } else if (std::isinf(*upper)) {
    out << "upper_bound: inf (both branches vacuous)\n";
  } else {
    out << "upper_bound: " << num(*upper) << '\n';
  }
  out << "verdict: " << verdict << '\n';
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.out_file.empty()) {
      file.open(config.out_file);
      if (!file) throw std::invalid_argument("cannot open output file " + config.out_file);
      sink = &file;
    }
    switch (config.command) {
      case Command::Radii:
        radii_table(config, *sink);
        break;
      case Command::ConjectureScan:
        conjecture_scan(config, *sink);
        break;
      case Command::Verify:
        if (!verify_report(config, *sink)) return kVerificationFailure;
        break;
      case Command::Bound:
        bound_report(config, *sink);
        break;
    }
    return kSuccess;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::domain_error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace steer::cli
