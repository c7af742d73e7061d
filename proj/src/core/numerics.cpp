#include "zmeq/core/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zmeq {

double log_sum_exp(std::span<const double> e) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : e) top = std::max(top, v);
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double v : e) s += std::exp(v - top);
  return top + std::log(s);
}

}  // namespace zmeq
