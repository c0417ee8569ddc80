#pragma once

// Steerability criteria for general bipartite states whose Bob marginal has
// full rank: local filtering on Bob, the channel-degradation lower bound on
// the critical radius, and the twirling upper bound.

#include <cstddef>
#include <limits>

#include "steer/qops.hpp"

namespace steer::criteria {

/// Choi matrix sum_ij |i><j| (x) E(|i><j|) of a CPTP map (input index major).
class ChannelChoi {
 public:
  ChannelChoi(std::size_t dim_in, std::size_t dim_out, Matrix m, double tol = 1e-9);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const Matrix& matrix() const { return m_; }

  /// (E (x) id)[tau] for tau on (dim_in x dim_b).
  Matrix apply_to_a(const Matrix& tau, std::size_t dim_b) const;

  static ChannelChoi identity(std::size_t d);
  /// X -> p X + (1 - p) Tr(X) 1/d.
  static ChannelChoi depolarizing(std::size_t d, double p);

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  Matrix m_;
};

/// (E (x) id)[tau] from a raw Choi matrix; no CPTP validation.
Matrix apply_choi_to_a(const Matrix& choi, std::size_t dim_in, std::size_t dim_out, const Matrix& tau,
                       std::size_t dim_b);

/// (1 (x) K) rho (1 (x) K^dag) with K = (dB rho_B)^{-1/2}; the output has Bob marginal 1/dB.
BipartiteState normalize_bob_marginal(const BipartiteState& rho);

inline constexpr double kDefaultFeasibilityTol = 1e-7;
inline constexpr double kDegradationEtaTol = 1e-6;

struct FeasibilityResult {
  bool feasible = false;
  double residual = 0.0;  // l1 mismatch of the best channel found
  Matrix choi;
  int solver_iterations = 0;
};

/// Is eta rho + (1 - eta) (1/dA) (x) rho_B = (E (x) id)[tau] for some CPTP E?
FeasibilityResult degradation_feasible(const BipartiteState& rho, const BipartiteState& tau, double eta,
                                       double tol = kDefaultFeasibilityTol);

struct DegradationResult {
  double eta = 0.0;
  Matrix choi;  // witness channel at eta
  double witness_residual = 0.0;
  int feasibility_solves = 0;
};

DegradationResult degradation_radius_detailed(const BipartiteState& rho, const BipartiteState& tau,
                                              double tol = kDefaultFeasibilityTol);
/// Largest eta for which rho_eta is reachable from tau by a channel on Alice's side.
double degradation_radius(const BipartiteState& rho, const BipartiteState& tau, double tol = kDefaultFeasibilityTol);

struct TwirlingFidelities {
  double f_s = 0.0;  // Tr(S^d rho)
  double f_w = 0.0;  // Tr(F^d rho)
};

TwirlingFidelities twirling_fidelities(const BipartiteState& rho);

enum class IsotropicDenominator {
  AsPrinted,  // d^2 - F_S - 1
  Twirled,    // d^2 F_S - 1
};

inline constexpr double kVacuousBound = std::numeric_limits<double>::infinity();

/// min{ (d+1) R(W) / (1 - d F_W),  (d^2-1) R(S) / denominator }, skipping
/// branches with non-positive denominator; +inf when both are vacuous.
double steerability_upper_bound(const BipartiteState& rho, double r2_werner, double r2_isotropic,
                                IsotropicDenominator denominator = IsotropicDenominator::AsPrinted);

}  // namespace steer::criteria
