#pragma once

// Cross-sections of the capacity of the uniform (Haar) ensemble.
//
// For a rank-r projection P on C^d, the operators int dw g(l) |l><l| that lie
// in span{P, 1} are u P + v (1 - P). Averaging the response over the
// stabilizer of P reduces g to a function of t = <l|P|l> ~ Beta(r, d - r), so
//     u = E[g t] / r,    v = E[g (1 - t)] / (d - r),    0 <= g <= 1.
// For fixed u the extremes of v are attained by threshold responses
// (Neyman-Pearson): g = 1{t <= c} maximizes v, g = 1{t >= c} minimizes it.

namespace steer::capacity {

/// Membership slack used by `contains`.
inline constexpr double kMembershipSlack = 1e-11;

/// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double x, double a, double b);
/// 1 - I_x(a, b), evaluated without cancellation.
double reg_inc_beta_complement(double x, double a, double b);
/// Density of Beta(a, b) at x.
double beta_pdf(double x, double a, double b);

/// E[t^j (1 - t)^k 1{t <= c}] for t ~ Beta(a, b).
double beta_partial_moment(double c, double a, double b, int j, int k);
/// E[t^j (1 - t)^k 1{t >= c}] for t ~ Beta(a, b).
double beta_partial_moment_upper(double c, double a, double b, int j, int k);

class MomentBody {
 public:
  MomentBody(int d, int r);

  int d() const { return d_; }
  int r() const { return r_; }
  /// Largest admissible u (and v): the moment of g = 1.
  double cap() const { return 1.0 / d_; }

 private:
  int d_;
  int r_;
};

/// Represents u P + v (1 - P).
struct PlanePoint {
  double u = 0.0;
  double v = 0.0;
};

/// Moments of g = 1{t >= c}.
PlanePoint threshold_point_upper(const MomentBody& body, double c);
/// Moments of g = 1{t <= c}.
PlanePoint threshold_point_lower(const MomentBody& body, double c);

struct VRange {
  double v_min = 0.0;
  double v_max = 0.0;
};

/// Admissible v for a given u in [0, 1/d].
VRange v_range(const MomentBody& body, double u);
double v_max(const MomentBody& body, double u);
double v_min(const MomentBody& body, double u);

/// Signed slack of p: min(v - v_min(u), v_max(u) - v) when u is admissible,
/// minus the u-overshoot otherwise. Non-negative iff p is in the body.
double membership_margin(const MomentBody& body, PlanePoint p);

bool contains(const MomentBody& body, PlanePoint p, double slack = kMembershipSlack);

}  // namespace steer::capacity
