#pragma once

#include <cmath>
#include <stdexcept>

namespace steer {

/// Raised when an iterative solver exhausts its iteration budget.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RootResult {
  double x = 0.0;
  int iterations = 0;
  double bracket_width = 0.0;
};

/// Bisection for the last point where `inside(x)` holds, given inside(lo) and
/// !inside(hi). Returns the inside endpoint once the bracket is below `tol`.
template <class Pred>
RootResult bisect_boundary(Pred&& inside, double lo, double hi, double tol, int max_iter) {
  RootResult res;
  while (hi - lo > tol) {
    if (res.iterations == max_iter) throw SolverError("bisect_boundary: iteration cap reached");
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (inside(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++res.iterations;
  }
  res.x = lo;
  res.bracket_width = hi - lo;
  return res;
}

/// Root of an increasing function f on [lo, hi] with f(lo) <= 0 <= f(hi).
/// Newton steps are taken while they stay inside the bracket, bisection
/// otherwise, so the bracket invariant is never lost.
template <class F, class DF>
RootResult solve_increasing(F&& f, DF&& df, double lo, double hi, double x0, double tol, int max_iter) {
  RootResult res;
  double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  for (; res.iterations < max_iter; ++res.iterations) {
    const double fx = f(x);
    if (fx == 0.0) {
      res.x = x;
      res.bracket_width = 0.0;
      return res;
    }
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = df(x);
    double next = (slope > 0.0 && std::isfinite(slope)) ? x - fx / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= tol || hi - lo <= tol) {
      res.x = x;
      res.bracket_width = hi - lo;
      ++res.iterations;
      return res;
    }
  }
  throw SolverError("solve_increasing: iteration cap reached");
}

}  // namespace steer
