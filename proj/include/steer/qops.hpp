#pragma once

// Dense finite-dimensional quantum linear algebra: validated operator types,
// partial traces, Haar sampling and the Werner / isotropic families.
//
// Bipartite index convention: |i>_A |b>_B  <->  row i * dimB + b.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "steer/random.hpp"

namespace steer {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical tolerances shared by the structural checks.
struct Tolerances {
  double structural = 1e-10;       // Hermiticity, positivity, idempotency, completeness
  double algebraic = 1e-12;        // identities that hold exactly in exact arithmetic
  double spectral_cutoff = 1e-12;  // eigenvalues below this are dropped when refining POVMs
};

class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix m, const Tolerances& tol = {});

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m, const Tolerances& tol = {});

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

/// Orthogonal projection of rank 1 <= r <= dim - 1.
class Projection {
 public:
  explicit Projection(Matrix m, const Tolerances& tol = {});
  /// Projection onto the span of the given orthonormal columns.
  static Projection onto(const Matrix& orthonormal_columns);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t rank() const { return rank_; }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
  std::size_t rank_ = 0;
};

/// One weighted rank-1 effect alpha |p><p|. `parent` indexes the effect of the
/// coarse POVM this element was refined from.
struct RankOneEffect {
  double weight = 0.0;
  Vector direction;
  std::size_t parent = 0;

  Matrix projector() const { return direction * direction.adjoint(); }
};

/// POVM in canonical form: weighted rank-1 projectors with sum_a alpha_a P_a = 1.
class Povm {
 public:
  Povm(std::size_t dim, std::vector<RankOneEffect> effects, const Tolerances& tol = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return effects_.size(); }
  std::size_t parent_count() const { return parent_count_; }
  const std::vector<RankOneEffect>& effects() const { return effects_; }
  const RankOneEffect& operator[](std::size_t a) const { return effects_[a]; }

 private:
  std::size_t dim_;
  std::vector<RankOneEffect> effects_;
  std::size_t parent_count_ = 0;
};

class BipartiteState {
 public:
  BipartiteState(std::size_t dim_a, std::size_t dim_b, Matrix m, const Tolerances& tol = {});

  std::size_t dim_a() const { return dim_a_; }
  std::size_t dim_b() const { return dim_b_; }
  const Matrix& matrix() const { return rho_.matrix(); }
  const DensityMatrix& density() const { return rho_; }

  Matrix marginal_a() const;
  Matrix marginal_b() const;

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  DensityMatrix rho_;
};

// --- linear algebra helpers -------------------------------------------------

Matrix kron(const Matrix& a, const Matrix& b);
Matrix partial_trace_a(const Matrix& m, std::size_t dim_a, std::size_t dim_b);
Matrix partial_trace_b(const Matrix& m, std::size_t dim_a, std::size_t dim_b);
double hermiticity_defect(const Matrix& m);
/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const Matrix& m);
/// Sum of absolute eigenvalues of the Hermitian part of m.
double trace_norm(const Matrix& m);
/// Hermitian square root of a PSD matrix raised to `power` (negative allowed if PD).
Matrix hermitian_power(const Matrix& m, double power);

// --- state families ---------------------------------------------------------

Matrix swap_operator(std::size_t d);
Matrix antisymmetric_projector(std::size_t d);
DensityMatrix max_entangled_projector(std::size_t d);

/// eta * 2 pi_- / (d^2 - d) + (1 - eta) 1/d^2.
BipartiteState werner_state(std::size_t d, double eta);
/// eta |phi+><phi+| + (1 - eta) 1/d^2.
BipartiteState isotropic_state(std::size_t d, double eta);

/// Tr_A[rho (E (x) 1)] for an effect 0 <= E <= 1 on A.
HermitianOperator conditional_state(const BipartiteState& rho, const HermitianOperator& effect);

/// Refines effects into weighted rank-1 projectors; weights renormalized so that
/// sum alpha = d exactly.
Povm canonical_povm(std::span<const HermitianOperator> effects, const Tolerances& tol = {});

/// Haar-random unit vector (normalized complex Gaussian).
Vector haar_state_sample(std::size_t d, RandomStream& stream);
Matrix haar_unitary(std::size_t d, RandomStream& stream);

/// Random n-outcome POVM made of rank-1 effects S^{-1/2} |g_a><g_a| S^{-1/2}.
std::vector<HermitianOperator> random_rank_one_povm(std::size_t d, std::size_t n, RandomStream& stream);
/// Random full-rank mixed state drawn from the Hilbert-Schmidt ensemble.
BipartiteState random_bipartite_state(std::size_t dim_a, std::size_t dim_b, RandomStream& stream);

}  // namespace steer
