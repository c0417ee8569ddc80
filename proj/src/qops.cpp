#include "steer/qops.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace steer {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_family_args(std::size_t d, double eta, const char* what) {
  if (d < 2) throw std::invalid_argument(std::string(what) + ": dimension must be >= 2");
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": mixing parameter must lie in [0, 1]");
  }
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix m, const Tolerances& tol) {
  require_square(m, "HermitianOperator");
  if (hermiticity_defect(m) > tol.structural) {
    throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
  }
  m_ = hermitian_part(m);
}

DensityMatrix::DensityMatrix(Matrix m, const Tolerances& tol) {
  require_square(m, "DensityMatrix");
  if (hermiticity_defect(m) > tol.structural) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  m_ = hermitian_part(m);
  if (std::abs(m_.trace().real() - 1.0) > tol.structural) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  if (min_eigenvalue(m_) < -tol.structural) {
    throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
  }
}

Projection::Projection(Matrix m, const Tolerances& tol) {
  require_square(m, "Projection");
  if (hermiticity_defect(m) > tol.structural) {
    throw std::invalid_argument("Projection: matrix is not Hermitian");
  }
  m_ = hermitian_part(m);
  if ((m_ * m_ - m_).cwiseAbs().maxCoeff() > tol.structural) {
    throw std::invalid_argument("Projection: matrix is not idempotent");
  }
  const double tr = m_.trace().real();
  const double r = std::round(tr);
  if (std::abs(tr - r) > tol.structural || r < 1.0 || r > static_cast<double>(m_.rows() - 1)) {
    throw std::invalid_argument("Projection: rank must be an integer in [1, dim - 1]");
  }
  rank_ = static_cast<std::size_t>(r);
}

Projection Projection::onto(const Matrix& orthonormal_columns) {
  return Projection(orthonormal_columns * orthonormal_columns.adjoint());
}

Povm::Povm(std::size_t dim, std::vector<RankOneEffect> effects, const Tolerances& tol)
    : dim_(dim), effects_(std::move(effects)) {
  if (dim_ == 0 || effects_.empty()) throw std::invalid_argument("Povm: empty");
  Matrix total = Matrix::Zero(dim_, dim_);
  double weight_sum = 0.0;
  for (const auto& e : effects_) {
    if (static_cast<std::size_t>(e.direction.size()) != dim_) {
      throw std::invalid_argument("Povm: effect dimension mismatch");
    }
    if (std::abs(e.direction.norm() - 1.0) > tol.structural) {
      throw std::invalid_argument("Povm: effect direction is not normalized");
    }
    if (e.weight < 0.0 || e.weight > 1.0 + tol.structural) {
      throw std::invalid_argument("Povm: effect weight outside [0, 1]");
    }
    total += e.weight * e.projector();
    weight_sum += e.weight;
    parent_count_ = std::max(parent_count_, e.parent + 1);
  }
  if ((total - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol.structural) {
    throw std::invalid_argument("Povm: effects do not sum to the identity");
  }
  if (std::abs(weight_sum - static_cast<double>(dim_)) > tol.structural) {
    throw std::invalid_argument("Povm: weights do not sum to the dimension");
  }
}

BipartiteState::BipartiteState(std::size_t dim_a, std::size_t dim_b, Matrix m, const Tolerances& tol)
    : dim_a_(dim_a), dim_b_(dim_b), rho_(std::move(m), tol) {
  if (dim_a_ == 0 || dim_b_ == 0 || rho_.dim() != dim_a_ * dim_b_) {
    throw std::invalid_argument("BipartiteState: matrix size does not match dimA * dimB");
  }
}

Matrix BipartiteState::marginal_a() const { return partial_trace_b(matrix(), dim_a_, dim_b_); }

Matrix BipartiteState::marginal_b() const { return partial_trace_a(matrix(), dim_a_, dim_b_); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix partial_trace_a(const Matrix& m, std::size_t dim_a, std::size_t dim_b) {
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index i = 0; i < da; ++i) out += m.block(i * db, i * db, db, db);
  return out;
}

Matrix partial_trace_b(const Matrix& m, std::size_t dim_a, std::size_t dim_b) {
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  Matrix out(da, da);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) out(i, j) = m.block(i * db, j * db, db, db).trace();
  }
  return out;
}

double hermiticity_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double trace_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

Matrix hermitian_power(const Matrix& m, double power) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double x = std::max(ev(k), 0.0);
    if (power < 0.0 && x == 0.0) throw std::domain_error("hermitian_power: singular matrix");
    ev(k) = std::pow(x, power);
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix swap_operator(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix f = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) f(j * n + i, i * n + j) = 1.0;
  }
  return f;
}

Matrix antisymmetric_projector(std::size_t d) {
  return 0.5 * (Matrix::Identity(d * d, d * d) - swap_operator(d));
}

DensityMatrix max_entangled_projector(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Vector phi = Vector::Zero(n * n);
  for (Eigen::Index k = 0; k < n; ++k) phi(k * n + k) = 1.0 / std::sqrt(static_cast<double>(d));
  return DensityMatrix(phi * phi.adjoint());
}

BipartiteState werner_state(std::size_t d, double eta) {
  require_family_args(d, eta, "werner_state");
  const double dd = static_cast<double>(d);
  const Matrix id = Matrix::Identity(d * d, d * d);
  Matrix w = eta * (2.0 / (dd * dd - dd)) * antisymmetric_projector(d) + (1.0 - eta) / (dd * dd) * id;
  return BipartiteState(d, d, std::move(w));
}

BipartiteState isotropic_state(std::size_t d, double eta) {
  require_family_args(d, eta, "isotropic_state");
  const double dd = static_cast<double>(d);
  const Matrix id = Matrix::Identity(d * d, d * d);
  Matrix s = eta * max_entangled_projector(d).matrix() + (1.0 - eta) / (dd * dd) * id;
  return BipartiteState(d, d, std::move(s));
}

HermitianOperator conditional_state(const BipartiteState& rho, const HermitianOperator& effect) {
  if (effect.dim() != rho.dim_a()) {
    throw std::invalid_argument("conditional_state: effect dimension does not match system A");
  }
  const Tolerances tol;
  const Matrix& e = effect.matrix();
  if (min_eigenvalue(e) < -tol.structural ||
      min_eigenvalue(Matrix::Identity(e.rows(), e.cols()) - e) < -tol.structural) {
    throw std::invalid_argument("conditional_state: operator is not an effect (0 <= E <= 1)");
  }
  const auto da = static_cast<Eigen::Index>(rho.dim_a());
  const auto db = static_cast<Eigen::Index>(rho.dim_b());
  const Matrix& m = rho.matrix();
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      if (e(j, i) == Complex(0.0)) continue;
      out += e(j, i) * m.block(i * db, j * db, db, db);
    }
  }
  return HermitianOperator(std::move(out));
}

Povm canonical_povm(std::span<const HermitianOperator> effects, const Tolerances& tol) {
  if (effects.empty()) throw std::invalid_argument("canonical_povm: no effects");
  const std::size_t d = effects.front().dim();
  Matrix total = Matrix::Zero(d, d);
  for (const auto& e : effects) {
    if (e.dim() != d) throw std::invalid_argument("canonical_povm: effect dimensions differ");
    if (min_eigenvalue(e.matrix()) < -tol.structural) {
      throw std::invalid_argument("canonical_povm: effect is not positive semidefinite");
    }
    total += e.matrix();
  }
  if ((total - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol.structural) {
    throw std::invalid_argument("canonical_povm: effects do not sum to the identity");
  }

  std::vector<RankOneEffect> refined;
  double weight_sum = 0.0;
  for (std::size_t a = 0; a < effects.size(); ++a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(effects[a].matrix());
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const double w = es.eigenvalues()(k);
      if (w <= tol.spectral_cutoff) continue;
      refined.push_back({w, es.eigenvectors().col(k), a});
      weight_sum += w;
    }
  }
  const double scale = static_cast<double>(d) / weight_sum;
  for (auto& e : refined) e.weight = std::min(e.weight * scale, 1.0);
  return Povm(d, std::move(refined), tol);
}

Vector haar_state_sample(std::size_t d, RandomStream& stream) {
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = Complex(stream.normal(), stream.normal());
  return v / v.norm();
}

Matrix haar_unitary(std::size_t d, RandomStream& stream) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(stream.normal(), stream.normal());
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex rkk = r(k, k);
    q.col(k) *= rkk / std::abs(rkk);
  }
  return q;
}

std::vector<HermitianOperator> random_rank_one_povm(std::size_t d, std::size_t n, RandomStream& stream) {
  if (n < d) throw std::invalid_argument("random_rank_one_povm: need at least d outcomes");
  std::vector<Vector> g;
  Matrix s = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < n; ++a) {
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = Complex(stream.normal(), stream.normal());
    s += v * v.adjoint();
    g.push_back(std::move(v));
  }
  const Matrix s_inv_half = hermitian_power(s, -0.5);
  std::vector<HermitianOperator> out;
  out.reserve(n);
  for (const auto& v : g) {
    const Vector w = s_inv_half * v;
    out.emplace_back(w * w.adjoint());
  }
  return out;
}

BipartiteState random_bipartite_state(std::size_t dim_a, std::size_t dim_b, RandomStream& stream) {
  const auto n = static_cast<Eigen::Index>(dim_a * dim_b);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(stream.normal(), stream.normal());
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return BipartiteState(dim_a, dim_b, std::move(rho));
}

}  // namespace steer
