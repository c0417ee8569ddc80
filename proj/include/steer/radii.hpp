#pragma once

// Steering critical radii of Werner and isotropic states for dichotomic
// measurements.
//
// A rank-r projective effect P on Alice's side steers Bob to a point of
// span{P, 1}; the rank-r radius is the largest mixing parameter for which that
// point stays inside the Haar capacity cross-section. The dichotomic radius is
// the minimum over r = 1..floor(d/2).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steer/capacity.hpp"

namespace steer::radii {

enum class FamilyKind { Werner, Isotropic };

std::string to_string(FamilyKind kind);
FamilyKind parse_family(const std::string& name);

struct StateFamily {
  FamilyKind kind;
  int d;

  StateFamily(FamilyKind k, int dim);
};

struct CriticalRadiusResult {
  double value = 0.0;
  int achieving_rank = 0;
  std::vector<std::pair<int, double>> per_rank;
  int solver_iterations = 0;
  double residual = 0.0;
};

/// Bob's conditional state for a rank-r projective effect, in (u, v) coordinates.
capacity::PlanePoint conditional_plane_point(const StateFamily& family, int r, double eta);

struct RankRadius {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

inline constexpr double kRadiusTol = 1e-10;
inline constexpr int kRadiusMaxIter = 200;

RankRadius solve_rank_radius(const StateFamily& family, int r, double tol = kRadiusTol);
double critical_radius_rank(const StateFamily& family, int r);
CriticalRadiusResult critical_radius_dichotomic(const StateFamily& family);

/// Werner: (d-1)^2 [1 - (1 - 1/d)^{1/(d-1)}];  isotropic: 1 - d^{-1/(d-1)}.
double closed_form_r2(const StateFamily& family);

struct ReferenceThresholds {
  double separability = 0.0;
  double projective = 0.0;
};

ReferenceThresholds reference_thresholds(const StateFamily& family);

double harmonic_number(int n);

struct Comparison {
  std::string label;
  double larger = 0.0;
  double smaller = 0.0;
  bool holds = false;
};

struct HierarchyReport {
  FamilyKind kind;
  int d = 0;
  double r2 = 0.0;
  double r2_closed_form = 0.0;
  double r_pvm = 0.0;
  double separability = 0.0;
  std::optional<double> povm_lower_bound;
  std::vector<Comparison> comparisons;
  std::vector<std::string> notes;
  bool holds = true;
};

/// Slack allowed on ordering comparisons (solver accuracy is kRadiusTol).
inline constexpr double kHierarchySlack = 1e-9;

HierarchyReport hierarchy_check(const StateFamily& family);

}  // namespace steer::radii
