#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zmeq/core/equilibrium_map.hpp"
#include "zmeq/transfer/market.hpp"

namespace zmeq {

/// Excess supply of a two-sided market with flows mu_xy = exp(log_flow(x, y)).
///
///   Q_x = sum_y mu_xy [+ single_x] - n_x
///   Q_y = m_y - sum_x mu_xy [- single_y]
///
/// Coordinates are X then Y. A full-assignment map drops one firm type y0
/// from the coordinates and holds its price at a fixed value.
class TwoSidedMap : public EquilibriumMap {
 public:
  const AggregateMarket& market() const noexcept { return market_; }
  std::size_t num_x() const noexcept { return market_.num_x(); }
  std::optional<std::size_t> pinned_y() const noexcept { return pinned_; }
  double pinned_price() const noexcept { return pinned_price_; }

  /// The price vector over all of X and Y, with the pinned price inserted.
  PriceVector expand(const PriceVector& p) const;

  /// Log of the match flow between x and y at prices (px, py).
  virtual double log_flow(std::size_t x, std::size_t y, double px, double py) const = 0;

  /// Log of the unmatched worker and firm masses; only used with singles.
  virtual double log_single_x(double px) const;
  virtual double log_single_y(double py) const;

  /// Payoffs read off the prices: u_x = -p_x + sigma log n_x and
  /// v_y = p_y + sigma log m_y.
  virtual double worker_payoff(std::size_t x, double px) const;
  virtual double firm_payoff(std::size_t y, double py) const;

  double residual(std::size_t z, double pi, std::span<const double> p) const override;

 protected:
  TwoSidedMap(AggregateMarket market, std::optional<std::size_t> pinned, double pinned_price, StructureFlags flags);

  /// Price of firm type y in p, or the pinned price.
  double y_price(std::size_t y, std::span<const double> p) const;
  /// Coordinate index of a (non-pinned) firm type.
  std::size_t y_coordinate(std::size_t y) const noexcept { return coord_of_y_[y]; }
  /// Firm type behind coordinate z >= num_x().
  std::size_t y_of(std::size_t z) const noexcept { return y_of_coord_[z - num_x()]; }

 private:
  AggregateMarket market_;
  std::optional<std::size_t> pinned_;
  double pinned_price_;
  std::vector<std::size_t> coord_of_y_;
  std::vector<std::size_t> y_of_coord_;
};

/// Matching with imperfectly transferable utility and singles:
/// mu_xy = exp(-D_xy(-p_x, p_y) / sigma), mu_x0 = exp(p_x / sigma),
/// mu_0y = exp(-p_y / sigma). When every frontier is TU the coordinate update
/// has a closed form (Sinkhorn / IPFP).
class TransferMap final : public TwoSidedMap {
 public:
  explicit TransferMap(AggregateMarket market);

  double log_flow(std::size_t x, std::size_t y, double px, double py) const override;
  double log_single_x(double px) const override;
  double log_single_y(double py) const override;
  std::optional<double> closed_form_update(std::size_t z, std::span<const double> p) const override;
};

/// Full assignment: no singles, the price of y0 pinned at pi. Closed-form
/// update when every frontier is TU.
class FullAssignmentMap final : public TwoSidedMap {
 public:
  FullAssignmentMap(AggregateMarket market, std::size_t y0, double pi);

  double log_flow(std::size_t x, std::size_t y, double px, double py) const override;
  std::optional<double> closed_form_update(std::size_t z, std::span<const double> p) const override;
};

/// Regularized optimal transport with balanced masses:
/// mu_xy = exp((phi_xy + p_x - p_y) / sigma). Aggregates are constant, so the
/// map is M0 but not M: adding a constant to every price leaves Q unchanged.
class OtMap final : public TwoSidedMap {
 public:
  explicit OtMap(AggregateMarket market);

  double log_flow(std::size_t x, std::size_t y, double px, double py) const override;
  /// u_x = -p_x and v_y = p_y, as in mu_xy = exp((phi_xy - u_x - v_y) / sigma).
  double worker_payoff(std::size_t x, double px) const override;
  double firm_payoff(std::size_t y, double py) const override;
  std::optional<double> closed_form_update(std::size_t z, std::span<const double> p) const override;
};

/// Rent-controlled housing with singles and sigma = 1:
/// mu_xy = min(exp(p_x + alpha_xy), exp(gamma_xy - p_y)).
class HousingMap final : public TwoSidedMap {
 public:
  explicit HousingMap(AggregateMarket market);

  double log_flow(std::size_t x, std::size_t y, double px, double py) const override;
  double log_single_x(double px) const override;
  double log_single_y(double py) const override;
};

/// Housing without singles and with y0 pinned. Responsiveness can fail, so
/// solving it is experimental.
class HousingFullAssignmentMap final : public TwoSidedMap {
 public:
  HousingFullAssignmentMap(AggregateMarket market, std::size_t y0, double pi);

  double log_flow(std::size_t x, std::size_t y, double px, double py) const override;
};

TransferMap build_transfer_map(const AggregateMarket& market);
FullAssignmentMap build_full_assignment_map(const AggregateMarket& market, const std::string& y0, double pi);
OtMap build_ot_map(const AggregateMarket& market);
HousingMap build_housing_map(const AggregateMarket& market);
HousingFullAssignmentMap build_housing_full_assignment_map(const AggregateMarket& market, const std::string& y0,
                                                           double pi);

/// Closed-form coordinate update of a TU transfer map; throws
/// UnsupportedFrontier when some frontier is not TU.
double sinkhorn_update(const TransferMap& q, std::size_t z, const PriceVector& p);

/// log a for the positive root a of a^2 + exp(log_s) a - n = 0.
double log_quadratic_root(double log_s, double n);

}  // namespace zmeq
