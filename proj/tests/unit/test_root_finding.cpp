#include <cmath>
#include <limits>

#include "doctest.h"
#include "zmeq/core/errors.hpp"
#include "zmeq/core/root_finding.hpp"

using namespace zmeq;

TEST_CASE("smallest_root: affine root") {
  BracketOptions opts;
  const double r = smallest_root([](double x) { return x - 2.0; }, opts, 0.0);
  CHECK(std::abs(r - 2.0) <= opts.bisection_tol);
  // Same root approached from above.
  const double s = smallest_root([](double x) { return x - 2.0; }, opts, 40.0);
  CHECK(std::abs(s - 2.0) <= opts.bisection_tol);
}

TEST_CASE("smallest_root: exponential, closed-form log") {
  BracketOptions opts;
  const double r = smallest_root([](double x) { return std::exp(x) - 3.0; }, opts, 0.0);
  CHECK(std::abs(r - std::log(3.0)) <= opts.bisection_tol);
}

TEST_CASE("smallest_root: left edge of a root plateau") {
  BracketOptions opts;
  // Zero on [0, inf): the smallest root is the plateau's left edge.
  const double r = smallest_root([](double x) { return std::min(x, 0.0); }, opts, 5.0);
  CHECK(std::abs(r) <= opts.bisection_tol);

  // Bounded plateau [a, b] = [-1.5, 3].
  auto f = [](double x) { return x < -1.5 ? x + 1.5 : (x > 3.0 ? x - 3.0 : 0.0); };
  for (double hint : {-20.0, -1.5, 0.0, 3.0, 17.0}) {
    const double a = smallest_root(f, opts, hint);
    CHECK(a >= -1.5 - opts.bisection_tol);
    CHECK(a <= -1.5 + opts.bisection_tol);
  }
}

TEST_CASE("smallest_root: zero set unbounded below has no smallest root") {
  // max(x, 0) vanishes on (-inf, 0]: the infimum is -inf.
  CHECK_THROWS_AS(smallest_root([](double x) { return std::max(x, 0.0); }, {}, 5.0), ResponsivenessViolation);
}

TEST_CASE("smallest_root: result stays on the hint's side") {
  BracketOptions opts;
  auto f = [](double x) { return x * x * x - 0.7; };
  const double up = smallest_root(f, opts, -3.0);
  const double down = smallest_root(f, opts, 3.0);
  CHECK(f(up) < 0.0);
  CHECK(f(down) >= 0.0);
  CHECK(down - up <= 2 * opts.bisection_tol);
}

TEST_CASE("smallest_root: no sign change") {
  BracketOptions opts;
  opts.max_expansions = 10;
  CHECK_THROWS_AS(smallest_root([](double) { return -1.0; }, opts, 0.0), ResponsivenessViolation);
  CHECK_THROWS_AS(smallest_root([](double) { return 1.0; }, opts, 0.0), ResponsivenessViolation);
  CHECK_THROWS_AS(smallest_root([](double) { return std::numeric_limits<double>::quiet_NaN(); }, opts, 0.0),
                  NonFiniteResidual);
}

TEST_CASE("bracket options validation") {
  BracketOptions bad;
  bad.growth_factor = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = {};
  bad.bisection_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}
