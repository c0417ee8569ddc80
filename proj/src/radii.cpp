#include "steer/radii.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "steer/lhs.hpp"
#include "steer/roots.hpp"

namespace steer::radii {

std::string to_string(FamilyKind kind) { return kind == FamilyKind::Werner ? "werner" : "isotropic"; }

FamilyKind parse_family(const std::string& name) {
  if (name == "werner") return FamilyKind::Werner;
  if (name == "isotropic") return FamilyKind::Isotropic;
  throw std::invalid_argument("unknown state family '" + name + "'");
}

StateFamily::StateFamily(FamilyKind k, int dim) : kind(k), d(dim) {
  if (dim < 2) throw std::invalid_argument("StateFamily: d must be >= 2");
}

namespace {

void check_rank(const StateFamily& family, int r) {
  if (r < 1 || r > family.d / 2) {
    throw std::invalid_argument("rank must lie in [1, floor(d/2)]");
  }
}

}  // namespace

capacity::PlanePoint conditional_plane_point(const StateFamily& family, int r, double eta) {
  check_rank(family, r);
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("mixing parameter must lie in [0, 1]");
  const double d = family.d;
  const double rr = r;
  const double noise = (1.0 - eta) * rr / (d * d);
  if (family.kind == FamilyKind::Werner) {
    return {eta * (rr - 1.0) / (d * (d - 1.0)) + noise, eta * rr / (d * (d - 1.0)) + noise};
  }
  return {eta / d + noise, noise};
}

RankRadius solve_rank_radius(const StateFamily& family, int r, double tol) {
  check_rank(family, r);
  const capacity::MomentBody body(family.d, r);
  auto inside = [&](double eta) {
    return capacity::membership_margin(body, conditional_plane_point(family, r, eta)) >= 0.0;
  };

  RankRadius out;
  if (inside(1.0)) {
    out.value = 1.0;
  } else {
    const RootResult res = bisect_boundary(inside, 0.0, 1.0, tol, kRadiusMaxIter);
    out.value = res.x;
    out.iterations = res.iterations;
    out.residual = res.bracket_width;
  }

  // The complementary effect 1 - P (rank d - r) steers Bob to
  // (1/d - u) P + (1/d - v)(1 - P); complement symmetry of the body keeps it inside.
  const capacity::PlanePoint p = conditional_plane_point(family, r, out.value);
  const double cap = body.cap();
  if (!capacity::contains(capacity::MomentBody(family.d, family.d - r), {cap - p.v, cap - p.u})) {
    throw std::logic_error("complementary conditional state left the capacity cross-section");
  }
  return out;
}

double critical_radius_rank(const StateFamily& family, int r) { return solve_rank_radius(family, r).value; }

CriticalRadiusResult critical_radius_dichotomic(const StateFamily& family) {
  CriticalRadiusResult res;
  res.value = 2.0;
  for (int r = 1; r <= family.d / 2; ++r) {
    const RankRadius rr = solve_rank_radius(family, r);
    res.per_rank.emplace_back(r, rr.value);
    res.solver_iterations += rr.iterations;
    if (rr.value < res.value) {
      res.value = rr.value;
      res.achieving_rank = r;
      res.residual = rr.residual;
    }
  }
  return res;
}

double closed_form_r2(const StateFamily& family) {
  const double d = family.d;
  if (family.kind == FamilyKind::Werner) {
    // (1 - 1/d)^{1/(d-1)} = exp(log1p(-1/d) / (d - 1))
    return (d - 1.0) * (d - 1.0) * -std::expm1(std::log1p(-1.0 / d) / (d - 1.0));
  }
  return -std::expm1(-std::log(d) / (d - 1.0));
}

double harmonic_number(int n) {
  double h = 0.0;
  for (int k = n; k >= 1; --k) h += 1.0 / k;
  return h;
}

ReferenceThresholds reference_thresholds(const StateFamily& family) {
  const double d = family.d;
  ReferenceThresholds t;
  t.separability = 1.0 / (d + 1.0);
  if (family.kind == FamilyKind::Werner) {
    t.projective = 1.0 - 1.0 / d;
  } else {
    t.projective = (harmonic_number(family.d) - 1.0) / (d - 1.0);
  }
  return t;
}

HierarchyReport hierarchy_check(const StateFamily& family) {
  HierarchyReport rep;
  rep.kind = family.kind;
  rep.d = family.d;
  rep.r2 = critical_radius_dichotomic(family).value;
  rep.r2_closed_form = closed_form_r2(family);
  const ReferenceThresholds ref = reference_thresholds(family);
  rep.r_pvm = ref.projective;
  rep.separability = ref.separability;

  auto compare = [&](std::string label, double larger, double smaller) {
    const bool ok = larger >= smaller - kHierarchySlack;
    rep.comparisons.push_back({std::move(label), larger, smaller, ok});
    rep.holds = rep.holds && ok;
  };
  compare("R2 >= R_PVM", rep.r2, rep.r_pvm);
  if (family.kind == FamilyKind::Werner) {
    rep.povm_lower_bound = lhs::povm_lower_bound_werner(family.d);
    compare("R_PVM >= R_POVM lower bound", rep.r_pvm, *rep.povm_lower_bound);
  }
  compare("R_PVM >= S", rep.r_pvm, rep.separability);

  const double gap = rep.r2 - rep.r_pvm;
  if (gap > kHierarchySlack) {
    std::ostringstream note;
    note << "R2 exceeds R_PVM by " << gap
         << "; projective measurements have d outcomes, so R_PVM >= R_d and hence R2 > R_" << family.d;
    rep.notes.push_back(note.str());
  } else {
    rep.notes.push_back("R2 and R_PVM coincide within solver accuracy");
  }
  return rep;
}

}  // namespace steer::radii
