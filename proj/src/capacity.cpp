#include "steer/capacity.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "steer/roots.hpp"

namespace steer::capacity {

namespace {

constexpr double kRootTol = 1e-12;
constexpr int kRootMaxIter = 200;

void check_threshold(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw std::domain_error("threshold must lie in [0, 1]");
}

// Threshold c at which the lower family g = 1{t <= c} has first moment u:
// I_c(r + 1, d - r) = d u.
double lower_threshold_for(const MomentBody& body, double u) {
  const double a = body.r() + 1.0;
  const double b = static_cast<double>(body.d() - body.r());
  const double target = body.d() * u;
  auto f = [&](double c) { return reg_inc_beta(c, a, b) - target; };
  auto df = [&](double c) { return beta_pdf(c, a, b); };
  return solve_increasing(f, df, 0.0, 1.0, a / (a + b), kRootTol, kRootMaxIter).x;
}

// Threshold c at which the upper family g = 1{t >= c} has first moment u:
// 1 - I_c(r + 1, d - r) = d u.
double upper_threshold_for(const MomentBody& body, double u) {
  const double a = body.r() + 1.0;
  const double b = static_cast<double>(body.d() - body.r());
  const double target = body.d() * u;
  auto f = [&](double c) { return target - reg_inc_beta_complement(c, a, b); };
  auto df = [&](double c) { return beta_pdf(c, a, b); };
  return solve_increasing(f, df, 0.0, 1.0, a / (a + b), kRootTol, kRootMaxIter).x;
}

double clamp_u(const MomentBody& body, double u) {
  constexpr double kEdge = 1e-15;
  if (!(u >= -kEdge && u <= body.cap() + kEdge)) {
    throw std::domain_error("v_range: u must lie in [0, 1/d]");
  }
  return std::clamp(u, 0.0, body.cap());
}

}  // namespace

MomentBody::MomentBody(int d, int r) : d_(d), r_(r) {
  if (d < 2) throw std::invalid_argument("MomentBody: d must be >= 2");
  if (r < 1 || r > d - 1) throw std::invalid_argument("MomentBody: rank must lie in [1, d - 1]");
}

PlanePoint threshold_point_upper(const MomentBody& body, double c) {
  check_threshold(c);
  const double d = body.d();
  const double r = body.r();
  return {reg_inc_beta_complement(c, r + 1.0, d - r) / d, reg_inc_beta_complement(c, r, d - r + 1.0) / d};
}

PlanePoint threshold_point_lower(const MomentBody& body, double c) {
  check_threshold(c);
  const double d = body.d();
  const double r = body.r();
  return {reg_inc_beta(c, r + 1.0, d - r) / d, reg_inc_beta(c, r, d - r + 1.0) / d};
}

double v_max(const MomentBody& body, double u) {
  u = clamp_u(body, u);
  if (u == 0.0) return 0.0;
  if (u == body.cap()) return body.cap();
  return threshold_point_lower(body, lower_threshold_for(body, u)).v;
}

double v_min(const MomentBody& body, double u) {
  u = clamp_u(body, u);
  if (u == 0.0) return 0.0;
  if (u == body.cap()) return body.cap();
  return threshold_point_upper(body, upper_threshold_for(body, u)).v;
}

VRange v_range(const MomentBody& body, double u) { return {v_min(body, u), v_max(body, u)}; }

double membership_margin(const MomentBody& body, PlanePoint p) {
  if (p.u < 0.0) return p.u;
  if (p.u > body.cap()) return body.cap() - p.u;
  const VRange range = v_range(body, p.u);
  return std::min(p.v - range.v_min, range.v_max - p.v);
}

bool contains(const MomentBody& body, PlanePoint p, double slack) {
  if (p.u < 0.0 || p.u > body.cap()) return false;
  return membership_margin(body, p) >= -slack;
}

}  // namespace steer::capacity
