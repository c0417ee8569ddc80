#pragma once

// Small dense primal-dual interior point solver for complex semidefinite
// programs with one Hermitian block and one non-negative orthant block:
//
//   minimize    <C, X> + c^T x
//   subject to  <A_i, X> + a_i^T x = b_i,   X >= 0 (Hermitian n x n),  x >= 0,
//
// with <A, X> = Re Tr(A X). Search directions are HKM with a Mehrotra
// predictor-corrector step. Intended for problems with n up to ~16 and a few
// hundred constraints.

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "steer/qops.hpp"

namespace steer::sdp {

struct Problem {
  int n = 0;
  Matrix cost_sdp;            // n x n Hermitian
  Eigen::VectorXd cost_lp;    // length L
  std::vector<Matrix> a_sdp;  // m Hermitian n x n
  Eigen::MatrixXd a_lp;       // m x L
  Eigen::VectorXd b;          // length m
};

struct Solution;

struct Options {
  double tol = 1e-9;
  int max_iter = 120;
  double step_fraction = 0.95;
  /// Checked after every residual evaluation; returning true ends the solve
  /// early with `converged` left false.
  std::function<bool(const Solution&)> stop;
};

struct Solution {
  Matrix x_sdp;
  Eigen::VectorXd x_lp;
  Eigen::VectorXd y;
  Matrix z_sdp;
  Eigen::VectorXd z_lp;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

Solution solve(const Problem& problem, const Options& options = {});

}  // namespace steer::sdp
