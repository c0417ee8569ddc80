#include "steer/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace steer::sdp {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

class Operator {
 public:
  explicit Operator(const Problem& p) : n_(p.n), m_(static_cast<Index>(p.a_sdp.size())), a_lp_(p.a_lp) {
    stacked_.resize(static_cast<Index>(n_) * n_, m_);
    for (Index i = 0; i < m_; ++i) {
      stacked_.col(i) = Eigen::Map<const Eigen::VectorXcd>(p.a_sdp[i].data(), p.a_sdp[i].size());
    }
  }

  Index m() const { return m_; }

  // A(X) + a_lp x
  VectorXd apply(const Matrix& x, const VectorXd& x_lp) const {
    const Eigen::Map<const Eigen::VectorXcd> vx(x.data(), x.size());
    VectorXd out = (stacked_.adjoint() * vx).real();
    if (a_lp_.cols() > 0) out += a_lp_ * x_lp;
    return out;
  }

  Matrix adjoint_sdp(const VectorXd& y) const {
    const Eigen::VectorXcd v = stacked_ * y.cast<Complex>();
    return Eigen::Map<const Matrix>(v.data(), n_, n_);
  }

  VectorXd adjoint_lp(const VectorXd& y) const { return a_lp_.transpose() * y; }

  // M_ij = Re Tr(A_i X A_j Zinv) + sum_k a_ik a_jk x_k / z_k
  MatrixXd schur(const Matrix& x, const Matrix& z_inv, const VectorXd& ratio) const {
    Eigen::MatrixXcd prod(static_cast<Index>(n_) * n_, m_);
    for (Index j = 0; j < m_; ++j) {
      const Eigen::Map<const Matrix> aj(stacked_.col(j).data(), n_, n_);
      const Matrix bj = x * aj * z_inv;
      prod.col(j) = Eigen::Map<const Eigen::VectorXcd>(bj.data(), bj.size());
    }
    MatrixXd mat = (stacked_.adjoint() * prod).real();
    if (a_lp_.cols() > 0) mat += a_lp_ * ratio.asDiagonal() * a_lp_.transpose();
    return 0.5 * (mat + mat.transpose());
  }

 private:
  int n_;
  Index m_;
  const MatrixXd& a_lp_;
  Eigen::MatrixXcd stacked_;
};

Matrix herm(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double inner(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace().real(); }

// Largest alpha with X + alpha dX >= 0 (infinity if unbounded).
double max_step_sdp(const Matrix& x, const Matrix& dx) {
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const Matrix l_inv = llt.matrixL().solve(Matrix::Identity(x.rows(), x.cols()));
  const Matrix s = herm(l_inv * dx * l_inv.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const VectorXd& x, const VectorXd& dx) {
  double step = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < x.size(); ++k) {
    if (dx(k) < 0.0) step = std::min(step, -x(k) / dx(k));
  }
  return step;
}

struct Direction {
  Matrix dx;
  VectorXd dx_lp;
  VectorXd dy;
  Matrix dz;
  VectorXd dz_lp;
};

}  // namespace

Solution solve(const Problem& p, const Options& opt) {
  const Index n = p.n;
  const Index lp = p.cost_lp.size();
  if (n <= 0 || p.cost_sdp.rows() != n || p.cost_sdp.cols() != n) {
    throw std::invalid_argument("sdp::solve: cost matrix has the wrong size");
  }
  if (p.b.size() != static_cast<Index>(p.a_sdp.size()) || p.a_lp.rows() != p.b.size() || p.a_lp.cols() != lp) {
    throw std::invalid_argument("sdp::solve: constraint data has inconsistent sizes");
  }
  const Operator op(p);
  const double nu = static_cast<double>(n + lp);
  const double b_norm = 1.0 + p.b.norm();
  const double c_norm = 1.0 + p.cost_sdp.norm() + p.cost_lp.norm();

  Solution s;
  s.x_sdp = Matrix::Identity(n, n);
  s.z_sdp = Matrix::Identity(n, n);
  s.x_lp = VectorXd::Ones(lp);
  s.z_lp = VectorXd::Ones(lp);
  s.y = VectorXd::Zero(op.m());

  for (s.iterations = 0; s.iterations < opt.max_iter; ++s.iterations) {
    const VectorXd rp = p.b - op.apply(s.x_sdp, s.x_lp);
    const Matrix rd = p.cost_sdp - op.adjoint_sdp(s.y) - s.z_sdp;
    const VectorXd rd_lp = p.cost_lp - op.adjoint_lp(s.y) - s.z_lp;
    const double gap = inner(s.x_sdp, s.z_sdp) + s.x_lp.dot(s.z_lp);
    const double mu = gap / nu;

    s.primal_objective = inner(p.cost_sdp, s.x_sdp) + p.cost_lp.dot(s.x_lp);
    s.dual_objective = p.b.dot(s.y);
    s.primal_residual = rp.norm() / b_norm;
    s.dual_residual = std::sqrt(rd.squaredNorm() + rd_lp.squaredNorm()) / c_norm;
    const double rel_gap =
        std::abs(s.primal_objective - s.dual_objective) / (1.0 + std::abs(s.primal_objective) + std::abs(s.dual_objective));
    if (s.primal_residual < opt.tol && s.dual_residual < opt.tol && rel_gap < opt.tol) {
      s.converged = true;
      break;
    }
    if (opt.stop && opt.stop(s)) break;

    const Matrix z_inv = herm(s.z_sdp.llt().solve(Matrix::Identity(n, n)));
    const VectorXd ratio = s.x_lp.cwiseQuotient(s.z_lp);
    MatrixXd schur_matrix = op.schur(s.x_sdp, z_inv, ratio);
    Eigen::LDLT<MatrixXd> schur(schur_matrix);
    // Near a face of the feasible set the Schur complement loses rank; a small
    // diagonal shift keeps the direction usable.
    const double scale = schur_matrix.diagonal().cwiseAbs().maxCoeff();
    for (double shift = 1e-14; schur.info() != Eigen::Success || schur.vectorD().minCoeff() <= 0.0; shift *= 100.0) {
      if (shift > 1e-8) return s;
      schur_matrix.diagonal().array() += shift * scale;
      schur.compute(schur_matrix);
    }

    const Matrix x_rd_zinv = s.x_sdp * rd * z_inv;
    const VectorXd x_rd_lp = s.x_lp.cwiseProduct(rd_lp).cwiseQuotient(s.z_lp);

    auto direction = [&](double sigma, const Matrix* corr, const VectorXd* corr_lp) {
      Matrix target = sigma * mu * z_inv - s.x_sdp - x_rd_zinv;
      if (corr) target -= (*corr) * z_inv;
      VectorXd target_lp = (sigma * mu) * s.z_lp.cwiseInverse() - s.x_lp - x_rd_lp;
      if (corr_lp) target_lp -= corr_lp->cwiseQuotient(s.z_lp);

      Direction dir;
      dir.dy = schur.solve(rp - op.apply(target, target_lp));
      dir.dz = herm(rd - op.adjoint_sdp(dir.dy));
      dir.dz_lp = rd_lp - op.adjoint_lp(dir.dy);
      // dX = target + X A^T(dy) Zinv, and A^T(dy) = Rd - dZ
      dir.dx = herm(target + s.x_sdp * (rd - dir.dz) * z_inv);
      dir.dx_lp = target_lp + s.x_lp.cwiseProduct(rd_lp - dir.dz_lp).cwiseQuotient(s.z_lp);
      return dir;
    };

    auto steps = [&](const Direction& dir) {
      const double ap = std::min(max_step_sdp(s.x_sdp, dir.dx), max_step_lp(s.x_lp, dir.dx_lp));
      const double ad = std::min(max_step_sdp(s.z_sdp, dir.dz), max_step_lp(s.z_lp, dir.dz_lp));
      return std::pair{std::min(1.0, opt.step_fraction * ap), std::min(1.0, opt.step_fraction * ad)};
    };

    const Direction pred = direction(0.0, nullptr, nullptr);
    const auto [ap_a, ad_a] = steps(pred);
    const double gap_aff = inner(s.x_sdp + ap_a * pred.dx, s.z_sdp + ad_a * pred.dz) +
                           (s.x_lp + ap_a * pred.dx_lp).dot(s.z_lp + ad_a * pred.dz_lp);
    const double sigma = std::clamp(std::pow(std::max(gap_aff, 0.0) / gap, 3.0), 0.0, 1.0);

    const Matrix corr = pred.dx * pred.dz;
    const VectorXd corr_lp = pred.dx_lp.cwiseProduct(pred.dz_lp);
    const Direction dir = direction(sigma, &corr, &corr_lp);
    const auto [ap, ad] = steps(dir);

    s.x_sdp = herm(s.x_sdp + ap * dir.dx);
    s.x_lp += ap * dir.dx_lp;
    s.y += ad * dir.dy;
    s.z_sdp = herm(s.z_sdp + ad * dir.dz);
    s.z_lp += ad * dir.dz_lp;
  }
  return s;
}

}  // namespace steer::sdp
