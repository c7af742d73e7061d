#pragma once

#include <functional>

namespace zmeq {

struct BracketOptions {
  double initial_halfwidth = 1.0;
  double growth_factor = 2.0;
  int max_expansions = 60;
  double bisection_tol = 1e-12;

  void validate() const;
};

/// Approximates inf{pi : f(pi) >= 0} for a nondecreasing f.
///
/// The bracket is grown geometrically from `hint` in the direction the sign
/// of f(hint) points to, then bisected on the predicate f(pi) < 0. The
/// returned point lies on the same side of the root as the hint (f < 0 when
/// searching upward, f >= 0 when searching downward), within bisection_tol of
/// the infimum. Throws ResponsivenessViolation when no sign change is found.
double smallest_root(const std::function<double(double)>& f, const BracketOptions& opts, double hint);

}  // namespace zmeq
