#include "steer/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steer/roots.hpp"
#include "steer/sdp.hpp"

namespace steer::criteria {

namespace {

using Eigen::Index;

constexpr double kMarginalTol = 1e-8;

Index idx(std::size_t v) { return static_cast<Index>(v); }

double tp_defect(const Matrix& choi, std::size_t dim_in, std::size_t dim_out) {
  const Matrix reduced = partial_trace_b(choi, dim_in, dim_out);
  return (reduced - Matrix::Identity(idx(dim_in), idx(dim_in))).cwiseAbs().maxCoeff();
}

// Sum of |Re| over the upper triangle and |Im| over the strict upper triangle.
double upper_l1(const Matrix& m) {
  double s = 0.0;
  for (Index k = 0; k < m.rows(); ++k) {
    for (Index l = k; l < m.cols(); ++l) {
      s += std::abs(m(k, l).real());
      if (l > k) s += std::abs(m(k, l).imag());
    }
  }
  return s;
}

void check_maximally_mixed_bob(const BipartiteState& s, const char* which) {
  const double db = static_cast<double>(s.dim_b());
  const Matrix target = Matrix::Identity(idx(s.dim_b()), idx(s.dim_b())) / db;
  if ((s.marginal_b() - target).cwiseAbs().maxCoeff() > kMarginalTol) {
    throw std::invalid_argument(std::string("degradation_radius: Bob marginal of ") + which +
                                " is not maximally mixed; normalize it first");
  }
}

// Re f(C) and Im f(C) for f(C) = Tr(W C), as Hermitian constraint matrices.
void push_complex_functional(const Matrix& w, bool with_imag, double re, double im, std::vector<Matrix>& a,
                             std::vector<double>& b) {
  a.push_back(0.5 * (w + w.adjoint()));
  b.push_back(re);
  if (with_imag) {
    const Complex i(0.0, 1.0);
    a.push_back(0.5 * (-i * w + i * w.adjoint()));
    b.push_back(im);
  }
}

// Greedy Gram-Schmidt over constraint matrices in the given order, under the
// real inner product Re Tr(A B). Rows that are linear combinations of earlier
// ones are dropped; the interior-point Schur complement is singular otherwise.
std::vector<bool> independent_constraints(const std::vector<Matrix>& a, const std::vector<std::size_t>& order) {
  std::vector<bool> keep(a.size(), false);
  std::vector<Eigen::VectorXcd> basis;
  for (std::size_t idx_row : order) {
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(a[idx_row].data(), a[idx_row].size());
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v -= q.dot(v).real() * q;
    }
    const double norm = v.norm();
    if (norm > 1e-9 * norm0) {
      basis.push_back(v / norm);
      keep[idx_row] = true;
    }
  }
  return keep;
}

}  // namespace

ChannelChoi::ChannelChoi(std::size_t dim_in, std::size_t dim_out, Matrix m, double tol)
    : dim_in_(dim_in), dim_out_(dim_out), m_(std::move(m)) {
  if (dim_in_ == 0 || dim_out_ == 0 || m_.rows() != idx(dim_in_ * dim_out_) || m_.cols() != m_.rows()) {
    throw std::invalid_argument("ChannelChoi: matrix size does not match dim_in * dim_out");
  }
  if (hermiticity_defect(m_) > tol || min_eigenvalue(m_) < -tol) {
    throw std::invalid_argument("ChannelChoi: Choi matrix is not positive semidefinite");
  }
  if (tp_defect(m_, dim_in_, dim_out_) > tol) {
    throw std::invalid_argument("ChannelChoi: map is not trace preserving");
  }
}

Matrix apply_choi_to_a(const Matrix& choi, std::size_t dim_in, std::size_t dim_out, const Matrix& tau,
                       std::size_t dim_b) {
  if (tau.rows() != idx(dim_in * dim_b)) throw std::invalid_argument("apply_choi_to_a: state size mismatch");
  const Index din = idx(dim_in);
  const Index dout = idx(dim_out);
  const Index db = idx(dim_b);
  Matrix out = Matrix::Zero(dout * db, dout * db);
  for (Index i = 0; i < din; ++i) {
    for (Index j = 0; j < din; ++j) {
      // E(|i><j|) (x) tau_ij
      out += kron(choi.block(i * dout, j * dout, dout, dout), tau.block(i * db, j * db, db, db));
    }
  }
  return out;
}

Matrix ChannelChoi::apply_to_a(const Matrix& tau, std::size_t dim_b) const {
  return apply_choi_to_a(m_, dim_in_, dim_out_, tau, dim_b);
}

ChannelChoi ChannelChoi::identity(std::size_t d) {
  return ChannelChoi(d, d, static_cast<double>(d) * max_entangled_projector(d).matrix());
}

ChannelChoi ChannelChoi::depolarizing(std::size_t d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing: strength must lie in [0, 1]");
  const double dd = static_cast<double>(d);
  const Matrix noise = Matrix::Identity(idx(d * d), idx(d * d)) / dd;
  return ChannelChoi(d, d, p * dd * max_entangled_projector(d).matrix() + (1.0 - p) * noise);
}

BipartiteState normalize_bob_marginal(const BipartiteState& rho) {
  const Matrix rho_b = rho.marginal_b();
  if (min_eigenvalue(rho_b) <= 1e-9) {
    throw std::invalid_argument("normalize_bob_marginal: Bob's reduced state is rank deficient");
  }
  const Matrix k = hermitian_power(static_cast<double>(rho.dim_b()) * rho_b, -0.5);
  const Matrix filter = kron(Matrix::Identity(idx(rho.dim_a()), idx(rho.dim_a())), k);
  Matrix out = filter * rho.matrix() * filter.adjoint();
  out /= out.trace().real();
  return BipartiteState(rho.dim_a(), rho.dim_b(), std::move(out));
}

FeasibilityResult degradation_feasible(const BipartiteState& rho, const BipartiteState& tau, double eta, double tol) {
  if (rho.dim_b() != tau.dim_b()) throw std::invalid_argument("degradation_radius: Bob dimensions differ");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("degradation_radius: eta must lie in [0, 1]");
  const std::size_t din = tau.dim_a();
  const std::size_t dout = rho.dim_a();
  const std::size_t db = rho.dim_b();
  const Index n = idx(din * dout);
  const Index nout = idx(dout * db);

  const Matrix target = eta * rho.matrix() +
                        (1.0 - eta) * kron(Matrix::Identity(idx(dout), idx(dout)) / static_cast<double>(dout),
                                           rho.marginal_b());
  const Matrix& t = tau.matrix();

  std::vector<Matrix> a;
  std::vector<double> b;
  // Output entry (K, L) = ((k, beta), (l, gamma)) equals
  // sum_ij C[(i,k),(j,l)] tau[(i,beta),(j,gamma)] = Tr(W C).
  for (Index kk = 0; kk < nout; ++kk) {
    for (Index ll = kk; ll < nout; ++ll) {
      const Index k = kk / idx(db), beta = kk % idx(db);
      const Index l = ll / idx(db), gamma = ll % idx(db);
      Matrix w = Matrix::Zero(n, n);
      for (Index i = 0; i < idx(din); ++i) {
        for (Index j = 0; j < idx(din); ++j) {
          w(j * idx(dout) + l, i * idx(dout) + k) = t(i * idx(db) + beta, j * idx(db) + gamma);
        }
      }
      push_complex_functional(w, ll > kk, target(kk, ll).real(), target(kk, ll).imag(), a, b);
    }
  }
  const std::size_t state_constraints = a.size();
  // Trace preservation: sum_k C[(i,k),(j,k)] = delta_ij.
  for (Index i = 0; i < idx(din); ++i) {
    for (Index j = i; j < idx(din); ++j) {
      Matrix w = Matrix::Zero(n, n);
      for (Index k = 0; k < idx(dout); ++k) w(j * idx(dout) + k, i * idx(dout) + k) = 1.0;
      push_complex_functional(w, j > i, i == j ? 1.0 : 0.0, 0.0, a, b);
    }
  }

  // Trace preservation first: it is always kept exactly, and the partial trace
  // of the state equalities over Alice's output is implied by it.
  std::vector<std::size_t> order;
  for (std::size_t k = state_constraints; k < a.size(); ++k) order.push_back(k);
  for (std::size_t k = 0; k < state_constraints; ++k) order.push_back(k);
  const std::vector<bool> keep = independent_constraints(a, order);

  sdp::Problem prob;
  prob.n = static_cast<int>(n);
  prob.cost_sdp = Matrix::Zero(n, n);
  std::vector<double> kept_b;
  std::vector<std::size_t> slack_rows;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!keep[k]) continue;
    if (k < state_constraints) slack_rows.push_back(prob.a_sdp.size());
    prob.a_sdp.push_back(a[k]);
    kept_b.push_back(b[k]);
  }
  const Index slack = idx(2 * slack_rows.size());
  prob.cost_lp = Eigen::VectorXd::Ones(slack);
  prob.a_lp = Eigen::MatrixXd::Zero(idx(prob.a_sdp.size()), slack);
  for (std::size_t s = 0; s < slack_rows.size(); ++s) {
    prob.a_lp(idx(slack_rows[s]), idx(2 * s)) = -1.0;
    prob.a_lp(idx(slack_rows[s]), idx(2 * s + 1)) = 1.0;
  }
  prob.b = Eigen::Map<const Eigen::VectorXd>(kept_b.data(), idx(kept_b.size()));

  // The decision only needs the optimum located relative to tol: a primal
  // point with small mismatch, or a dual bound above tol.
  sdp::Options opt;
  opt.stop = [tol](const sdp::Solution& s) {
    const bool witness = s.primal_residual < 1e-10 && s.primal_objective < 0.1 * tol;
    const bool certificate = s.dual_residual < 1e-10 && s.dual_objective > 2.0 * tol;
    return witness || certificate;
  };
  const sdp::Solution sol = sdp::solve(prob, opt);

  FeasibilityResult res;
  res.choi = sol.x_sdp;
  res.solver_iterations = sol.iterations;
  res.residual = upper_l1(apply_choi_to_a(res.choi, din, dout, t, db) - target);
  res.feasible = res.residual <= tol && tp_defect(res.choi, din, dout) <= tol;
  if (res.feasible || sol.converged) return res;
  if (sol.dual_residual < 1e-6 && sol.dual_objective > tol) return res;
  // Stalls happen when eta sits within solver accuracy of the boundary, where
  // the optimum is of order tol and either answer is within bisection
  // resolution. Anything else is a genuine failure.
  if (sol.primal_residual < 1e-6 && sol.primal_objective < 1e3 * tol) return res;
  throw SolverError("degradation_radius: semidefinite solver did not converge");
}

DegradationResult degradation_radius_detailed(const BipartiteState& rho, const BipartiteState& tau, double tol) {
  check_maximally_mixed_bob(rho, "rho");
  check_maximally_mixed_bob(tau, "tau");
  DegradationResult out;
  auto probe = [&](double eta) {
    ++out.feasibility_solves;
    return degradation_feasible(rho, tau, eta, tol);
  };

  FeasibilityResult best = probe(1.0);
  if (best.feasible) {
    out.eta = 1.0;
  } else {
    best = probe(0.0);
    if (!best.feasible) throw SolverError("degradation_radius: eta = 0 reported infeasible");
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > kDegradationEtaTol) {
      const double mid = 0.5 * (lo + hi);
      FeasibilityResult r = probe(mid);
      if (r.feasible) {
        lo = mid;
        best = std::move(r);
      } else {
        hi = mid;
      }
    }
    out.eta = lo;
  }
  out.choi = std::move(best.choi);
  out.witness_residual = best.residual;
  return out;
}

double degradation_radius(const BipartiteState& rho, const BipartiteState& tau, double tol) {
  return degradation_radius_detailed(rho, tau, tol).eta;
}

TwirlingFidelities twirling_fidelities(const BipartiteState& rho) {
  if (rho.dim_a() != rho.dim_b()) throw std::invalid_argument("twirling_fidelities: requires dimA == dimB");
  const std::size_t d = rho.dim_a();
  TwirlingFidelities f;
  f.f_s = (max_entangled_projector(d).matrix() * rho.matrix()).trace().real();
  f.f_w = (swap_operator(d) * rho.matrix()).trace().real();
  return f;
}

double steerability_upper_bound(const BipartiteState& rho, double r2_werner, double r2_isotropic,
                                IsotropicDenominator denominator) {
  const TwirlingFidelities f = twirling_fidelities(rho);
  const double d = static_cast<double>(rho.dim_a());
  double bound = kVacuousBound;
  const double werner_den = 1.0 - d * f.f_w;
  if (werner_den > 0.0) bound = std::min(bound, (d + 1.0) * r2_werner / werner_den);
  const double iso_den = denominator == IsotropicDenominator::AsPrinted ? d * d - f.f_s - 1.0 : d * d * f.f_s - 1.0;
  if (iso_den > 0.0) bound = std::min(bound, (d * d - 1.0) * r2_isotropic / iso_den);
  return bound;
}

}  // namespace steer::criteria
