#include "zmeq/core/root_finding.hpp"

#include <cmath>
#include <string>

#include "zmeq/core/errors.hpp"

namespace zmeq {

void BracketOptions::validate() const {
  if (!(initial_halfwidth > 0.0)) throw InvalidInput("initial_halfwidth must be > 0");
  if (!(growth_factor > 1.0)) throw InvalidInput("growth_factor must be > 1");
  if (max_expansions < 1) throw InvalidInput("max_expansions must be positive");
  if (!(bisection_tol > 0.0)) throw InvalidInput("bisection_tol must be > 0");
}

double smallest_root(const std::function<double(double)>& f, const BracketOptions& opts, double hint) {
  opts.validate();
  if (!std::isfinite(hint)) throw InvalidInput("smallest_root: hint is not finite");

  auto eval = [&f](double x) {
    const double v = f(x);
    if (std::isnan(v)) throw NonFiniteResidual("", v);
    return v;
  };

  const bool upward = eval(hint) < 0.0;
  double lo = hint;
  double hi = hint;
  double step = opts.initial_halfwidth;
  for (int k = 0;; ++k) {
    if (k > opts.max_expansions) {
      throw ResponsivenessViolation(
          "", std::string("no sign change ") + (upward ? "above" : "below") + " hint " + std::to_string(hint) +
                  " after " + std::to_string(opts.max_expansions) + " bracket expansions");
    }
    const double x = upward ? hint + step : hint - step;
    if (!std::isfinite(x)) {
      throw ResponsivenessViolation("", "bracket left the finite range");
    }
    const bool negative = eval(x) < 0.0;
    if (upward) {
      if (!negative) {
        hi = x;
        break;
      }
      lo = x;
    } else {
      if (negative) {
        lo = x;
        break;
      }
      hi = x;
    }
    step *= opts.growth_factor;
  }

  while (hi - lo > opts.bisection_tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // no representable point left in between
    if (eval(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return upward ? lo : hi;
}

}  // namespace zmeq
