#pragma once

#include <span>
#include <vector>

#include "zmeq/core/equilibrium_map.hpp"
#include "zmeq/core/price_vector.hpp"
#include "zmeq/core/solver.hpp"
#include "zmeq/matching/individual.hpp"

namespace zmeq {

/// Prices over workers then firms: p_i = -u_i, p_j = v_j.
///   T_i(p) = min over {-alpha_ij : gamma_ij >= p_j} and 0,
///   T_j(p) = max over {gamma_ij : p_i >= -alpha_ij} and 0.
PriceVector adachi_map(const IndividualMarket& market, const PriceVector& p);

/// Indicator excess supply. With M_ij = 1{p_i >= -alpha_ij, gamma_ij >= p_j},
///   Q_i = sum_j M_ij + 1{p_i >= 0} - 1,
///   Q_j = 1 - sum_i M_ij - 1{p_j <= 0}.
/// The registered coordinate update is Adachi's map.
class NtMap final : public EquilibriumMap {
 public:
  explicit NtMap(IndividualMarket market);

  const IndividualMarket& market() const noexcept { return market_; }
  double residual(std::size_t z, double pi, std::span<const double> p) const override;
  std::optional<double> closed_form_update(std::size_t z, std::span<const double> p) const override;

 private:
  IndividualMarket market_;
};

NtMap build_nt_map(const IndividualMarket& market);

enum class AdachiStart { worker_optimal, firm_optimal };

/// worker_optimal: p_i = min_j{-alpha_ij, 0}, p_j = min_i{gamma_ij, 0}.
/// firm_optimal: the same with max.
PriceVector adachi_start(const IndividualMarket& market, AdachiStart start);

struct AdachiResult {
  IndividualOutcome outcome;
  PriceVector prices;
  SolveTrace trace;
};

/// Gauss-Seidel on Adachi's map (workers, then firms) until the prices repeat
/// exactly. More than |I||J| + |I| + |J| + 1 sweeps raises InternalError.
AdachiResult adachi_solve(const IndividualMarket& market, AdachiStart start);

/// Outcome encoded by a fixed point of Adachi's map. InternalError if p is
/// not one.
IndividualOutcome outcome_from_prices(const IndividualMarket& market, const PriceVector& p);

/// Stable outcome as prices (-u, v).
PriceVector prices_from_outcome(const IndividualMarket& market, const IndividualOutcome& outcome);

/// One Gale-Shapley step as damped Gauss-Seidel: each worker moves to
/// min{T_i(p), N_i(p)} with N_i(p) = min{-alpha_ij : -alpha_ij > p_i} (no cap
/// when empty), then each firm moves to T_j at the new worker prices.
PriceVector damped_step(const IndividualMarket& market, const PriceVector& p);

}  // namespace zmeq
