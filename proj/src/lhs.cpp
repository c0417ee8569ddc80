#include "steer/lhs.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "steer/capacity.hpp"
#include "steer/parallel.hpp"

namespace steer::lhs {

ResponseModel::ResponseModel(Povm povm) : povm_(std::move(povm)) {
  const auto d = static_cast<Eigen::Index>(povm_.dim());
  if (d < 2) throw std::invalid_argument("ResponseModel: dimension must be >= 2");
  directions_.resize(d, static_cast<Eigen::Index>(povm_.size()));
  weights_.reserve(povm_.size());
  for (std::size_t a = 0; a < povm_.size(); ++a) {
    directions_.col(static_cast<Eigen::Index>(a)) = povm_[a].direction;
    weights_.push_back(povm_[a].weight);
  }
}

void ResponseModel::response_into(const Vector& lambda, std::span<double> overlaps, std::span<double> out) const {
  const double d = povm_.dim();
  const double cutoff = 1.0 / d;
  const std::size_t n = weights_.size();
  double spent = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const double t = std::norm(directions_.col(static_cast<Eigen::Index>(a)).dot(lambda));
    overlaps[a] = t;
    // Theta(0) = 1: the cutoff is closed.
    const double s = t <= cutoff ? weights_[a] * (1.0 - t) / (d - 1.0) : 0.0;
    out[a] = s;
    spent += s;
  }
  const double rest = (1.0 - spent) / d;
  for (std::size_t a = 0; a < n; ++a) out[a] += weights_[a] * rest;
}

std::vector<double> ResponseModel::response(const Vector& lambda) const {
  if (static_cast<std::size_t>(lambda.size()) != povm_.dim()) {
    throw std::invalid_argument("response: hidden state has the wrong dimension");
  }
  if (std::abs(lambda.norm() - 1.0) > 1e-10) throw std::invalid_argument("response: hidden state is not normalized");
  std::vector<double> overlaps(outcomes());
  std::vector<double> g(outcomes());
  response_into(lambda, overlaps, g);
  return g;
}

double povm_lower_bound_werner(int d) {
  if (d < 2) throw std::invalid_argument("povm_lower_bound_werner: d must be >= 2");
  const double dd = d;
  // (d-1)^{d+1} d^{-d} = (d - 1) (1 - 1/d)^d
  return (1.0 + (dd - 1.0) * std::exp(dd * std::log1p(-1.0 / dd))) / (dd + 1.0);
}

namespace {

// Coefficients of int dw (1 - t)/(d - 1) [t <= 1/d] |l><l| = x P + y (1 - P)
// for a rank-1 P, with t ~ Beta(1, d - 1).
struct FirstTerm {
  double x;
  double y;
};

FirstTerm first_term(int d) {
  const double dd = d;
  const double c = 1.0 / dd;
  const double b = dd - 1.0;
  return {capacity::beta_partial_moment(c, 1.0, b, 1, 1) / b,
          capacity::beta_partial_moment(c, 1.0, b, 0, 2) / (b * b)};
}

}  // namespace

double realized_eta(int d) {
  if (d < 2) throw std::invalid_argument("realized_eta: d must be >= 2");
  const FirstTerm ft = first_term(d);
  // Only the first response term distinguishes P from 1 - P; the Werner
  // conditional state separates the two blocks by eta / (d (d - 1)).
  return static_cast<double>(d) * (d - 1.0) * (ft.y - ft.x);
}

double realized_eta(const ResponseModel& model, std::size_t a) {
  if (a >= model.outcomes()) throw std::out_of_range("realized_eta: outcome index out of range");
  const int d = model.d();
  const double alpha = model.povm()[a].weight;
  const FirstTerm ft = first_term(d);
  const double block_gap = alpha * (ft.y - ft.x);
  const double target_gap_per_eta = alpha / (static_cast<double>(d) * (d - 1.0));
  return block_gap / target_gap_per_eta;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    weights[k] = 2.0 * v0 * v0;
  }
}

namespace {

struct Accumulator {
  std::vector<Matrix> sum;
  std::vector<Eigen::MatrixXd> sq_re;
  std::vector<Eigen::MatrixXd> sq_im;

  Accumulator(std::size_t count, Eigen::Index d)
      : sum(count, Matrix::Zero(d, d)), sq_re(count, Eigen::MatrixXd::Zero(d, d)),
        sq_im(count, Eigen::MatrixXd::Zero(d, d)) {}

  void add(std::size_t k, double g, const Matrix& outer, const Eigen::MatrixXd& outer_re2,
           const Eigen::MatrixXd& outer_im2) {
    if (g == 0.0) return;
    sum[k] += g * outer;
    sq_re[k] += (g * g) * outer_re2;
    sq_im[k] += (g * g) * outer_im2;
  }

  void merge(const Accumulator& other) {
    for (std::size_t k = 0; k < sum.size(); ++k) {
      sum[k] += other.sum[k];
      sq_re[k] += other.sq_re[k];
      sq_im[k] += other.sq_im[k];
    }
  }
};

void finish(const Accumulator& acc, std::size_t n, std::vector<Matrix>& mean, std::vector<Matrix>& se) {
  const double nn = static_cast<double>(n);
  mean.clear();
  se.clear();
  for (std::size_t k = 0; k < acc.sum.size(); ++k) {
    Matrix m = acc.sum[k] / nn;
    const Eigen::Index d = m.rows();
    Matrix e(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const double var_re = std::max(0.0, (acc.sq_re[k](i, j) - nn * std::norm(m(i, j).real())) / (nn - 1.0));
        const double var_im = std::max(0.0, (acc.sq_im[k](i, j) - nn * std::norm(m(i, j).imag())) / (nn - 1.0));
        e(i, j) = Complex(std::sqrt(var_re / nn), std::sqrt(var_im / nn));
      }
    }
    mean.push_back(std::move(m));
    se.push_back(std::move(e));
  }
}

// Adds one weighted hidden state to the fine and coarse accumulators.
class SampleSink {
 public:
  SampleSink(const ResponseModel& model)
      : model_(model), fine_(model.outcomes(), model.d()), coarse_(model.povm().parent_count(), model.d()),
        overlaps_(model.outcomes()), g_(model.outcomes()), g_parent_(model.povm().parent_count()) {}

  void add(const Vector& lambda, double weight) {
    model_.response_into(lambda, overlaps_, g_);
    outer_ = lambda * lambda.adjoint();
    re2_ = outer_.real().cwiseAbs2();
    im2_ = outer_.imag().cwiseAbs2();
    std::fill(g_parent_.begin(), g_parent_.end(), 0.0);
    for (std::size_t a = 0; a < g_.size(); ++a) {
      fine_.add(a, weight * g_[a], outer_, re2_, im2_);
      g_parent_[model_.povm()[a].parent] += g_[a];
    }
    for (std::size_t p = 0; p < g_parent_.size(); ++p) coarse_.add(p, weight * g_parent_[p], outer_, re2_, im2_);
  }

  Accumulator& fine() { return fine_; }
  Accumulator& coarse() { return coarse_; }

 private:
  const ResponseModel& model_;
  Accumulator fine_;
  Accumulator coarse_;
  std::vector<double> overlaps_;
  std::vector<double> g_;
  std::vector<double> g_parent_;
  Matrix outer_;
  Eigen::MatrixXd re2_;
  Eigen::MatrixXd im2_;
};

Assemblage monte_carlo(const ResponseModel& model, const MonteCarlo& mc) {
  if (mc.samples < 2) throw std::invalid_argument("reconstruct_assemblage: need at least 2 samples");
  const std::size_t shards = std::max<std::size_t>(1, std::min(mc.shards, mc.samples));
  const RandomStream root(mc.seed);
  std::vector<SampleSink> sinks;
  sinks.reserve(shards);
  for (std::size_t s = 0; s < shards; ++s) sinks.emplace_back(model);

  parallel_for(shards, [&](std::size_t s) {
    const std::size_t count = mc.samples / shards + (s < mc.samples % shards ? 1 : 0);
    RandomStream stream = root.split(s);
    const auto d = static_cast<std::size_t>(model.d());
    for (std::size_t i = 0; i < count; ++i) sinks[s].add(haar_state_sample(d, stream), 1.0);
  });

  for (std::size_t s = 1; s < shards; ++s) {
    sinks[0].fine().merge(sinks[s].fine());
    sinks[0].coarse().merge(sinks[s].coarse());
  }
  Assemblage out;
  out.samples = mc.samples;
  finish(sinks[0].fine(), mc.samples, out.conditionals, out.std_errors);
  finish(sinks[0].coarse(), mc.samples, out.coarse, out.coarse_std_errors);
  return out;
}

Assemblage quadrature(const ResponseModel& model, const Quadrature& q) {
  if (model.d() != 2) throw std::invalid_argument("reconstruct_assemblage: quadrature is only available for d = 2");
  if (q.order < 1) throw std::invalid_argument("reconstruct_assemblage: quadrature order must be >= 1");
  std::vector<double> nodes;
  std::vector<double> weights;
  gauss_legendre(q.order, nodes, weights);
  const int n_phi = 2 * q.order;

  SampleSink sink(model);
  Vector lambda(2);
  for (int i = 0; i < q.order; ++i) {
    const double x = nodes[i];
    const double c = std::sqrt(0.5 * (1.0 + x));
    const double s = std::sqrt(0.5 * (1.0 - x));
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / n_phi;
      lambda(0) = c;
      lambda(1) = std::polar(s, phi);
      // dw = d(cos theta) d(phi) / (4 pi)
      sink.add(lambda, weights[i] / (2.0 * n_phi));
    }
  }
  Assemblage out;
  out.samples = static_cast<std::size_t>(q.order) * n_phi;
  for (const auto& m : sink.fine().sum) {
    out.conditionals.push_back(m);
    out.std_errors.push_back(Matrix::Zero(m.rows(), m.cols()));
  }
  for (const auto& m : sink.coarse().sum) {
    out.coarse.push_back(m);
    out.coarse_std_errors.push_back(Matrix::Zero(m.rows(), m.cols()));
  }
  return out;
}

}  // namespace

Assemblage reconstruct_assemblage(const ResponseModel& model, const ReconstructionMethod& method) {
  if (const auto* mc = std::get_if<MonteCarlo>(&method)) return monte_carlo(model, *mc);
  return quadrature(model, std::get<Quadrature>(method));
}

}  // namespace steer::lhs
