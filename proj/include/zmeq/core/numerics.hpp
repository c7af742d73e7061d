#pragma once

#include <span>

namespace zmeq {

/// log(sum_k exp(e_k)), shifted by the largest exponent. Returns -inf for an
/// empty input or when every exponent is -inf.
double log_sum_exp(std::span<const double> e);

}  // namespace zmeq
