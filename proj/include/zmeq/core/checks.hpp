#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zmeq/core/equilibrium_map.hpp"

namespace zmeq {

/// How sample pairs are drawn. Base points are uniform on [-scale, scale]^n;
/// partners cycle through four kinds: independent, shifted up, shifted down,
/// and a small mixed-sign perturbation.
struct SamplingOptions {
  double scale = 5.0;
  double equality_tol = 1e-9;  // relative, for Q(a) = Q(b) comparisons
};

struct PairViolation {
  std::vector<double> p;
  std::vector<double> p_prime;
};

struct PropertyReport {
  std::size_t pairs_sampled = 0;
  std::size_t comparable_pairs = 0;  // pairs with Q(p) <= Q(p') componentwise
  std::vector<PairViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Samples pairs and flags every Q(p) <= Q(p') with p not <= p'.
PropertyReport check_inverse_isotone(const EquilibriumMap& q, std::size_t sample_count, std::uint64_t seed,
                                     const SamplingOptions& opts = {});

/// Samples pairs and flags every Q(p) <= Q(p') for which Q(p meet p') != Q(p)
/// or Q(p join p') != Q(p').
PropertyReport check_m0_strong_set_order(const EquilibriumMap& q, std::size_t sample_count, std::uint64_t seed,
                                         const SamplingOptions& opts = {});

}  // namespace zmeq
