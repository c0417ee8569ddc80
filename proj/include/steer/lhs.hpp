#pragma once

// Local-hidden-state model for arbitrary POVMs on Werner states, driven by the
// Haar ensemble. Hidden states |l> are announced as outcome a with probability
//
//   G_a(l) = alpha_a s_a(l) + (alpha_a / d) [1 - sum_b alpha_b s_b(l)],
//   s_b(l) = <l|(1 - P_b)|l> / (d - 1) * [<l|P_b|l> <= 1/d].
//
// The first term is the anticorrelated dichotomic response; the second
// redistributes the remaining probability mass in proportion to alpha_a.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "steer/qops.hpp"
#include "steer/random.hpp"

namespace steer::lhs {

class ResponseModel {
 public:
  explicit ResponseModel(Povm povm);

  int d() const { return static_cast<int>(povm_.dim()); }
  const Povm& povm() const { return povm_; }
  std::size_t outcomes() const { return povm_.size(); }

  /// Outcome probabilities for a normalized hidden state.
  std::vector<double> response(const Vector& lambda) const;
  /// Allocation-free variant; `overlaps` must hold outcomes() entries and
  /// receives <l|P_a|l>. No normalization check.
  void response_into(const Vector& lambda, std::span<double> overlaps, std::span<double> out) const;

 private:
  Povm povm_;
  Matrix directions_;  // column a = direction of P_a
  std::vector<double> weights_;
};

/// [1 + (d-1)^{d+1} d^{-d}] / (d + 1).
double povm_lower_bound_werner(int d);

/// Mixing parameter reproduced by the model in dimension d: the eta for which
/// the integrated response matches Tr_A[W^d_eta (P (x) 1)] on rank-1 P.
double realized_eta(int d);
/// Same quantity extracted from outcome a of a concrete model.
double realized_eta(const ResponseModel& model, std::size_t a);

struct MonteCarlo {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t shards = 16;
};

/// Product Gauss-Legendre (cos theta) x trapezoid (phi) rule on the Bloch sphere.
struct Quadrature {
  int order = 0;
};

using ReconstructionMethod = std::variant<MonteCarlo, Quadrature>;

/// Estimates of int dw G_a(l) |l><l|, per refined outcome and summed per parent
/// effect of the coarse POVM. Standard errors are per entry: real part of the
/// error matrix for the real part of the entry, imaginary for the imaginary.
struct Assemblage {
  std::vector<Matrix> conditionals;
  std::vector<Matrix> std_errors;
  std::vector<Matrix> coarse;
  std::vector<Matrix> coarse_std_errors;
  std::size_t samples = 0;
};

Assemblage reconstruct_assemblage(const ResponseModel& model, const ReconstructionMethod& method);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace steer::lhs
