#pragma once

#include "zmeq/core/matrix.hpp"
#include "zmeq/core/price_vector.hpp"
#include "zmeq/transfer/maps.hpp"
#include "zmeq/transfer/market.hpp"

namespace zmeq {

/// Supersolution of a map with singles: exp(p_x / sigma) just above n_x, then
/// each p_y doubled until Q_y >= 0. Throws InternalError if the result fails
/// verification.
PriceVector singles_supersolution(const TwoSidedMap& q);

/// Mirror image: exp(-p_y / sigma) just above m_y, then each p_x doubled
/// downward until Q_x <= 0.
PriceVector singles_subsolution(const TwoSidedMap& q);

/// Supersolution of a full-assignment map: p_x = sigma log n_x - U_x where
/// (U_x, pi + sigma log n_x) lies on the frontier of (x, y0), then each p_y
/// doubled until Q_y >= 0. NTU frontiers throw UnsupportedFrontier.
PriceVector full_assignment_supersolution(const TwoSidedMap& q);

/// Flows and payoffs at prices p over the map's coordinates.
AggregateEquilibrium recover_equilibrium(const TwoSidedMap& q, const PriceVector& p);

/// Largest violation of the marginal constraints.
double feasibility_residual(const AggregateMarket& market, const AggregateEquilibrium& eq);

/// max |D_xy(U_xy, V_xy)| with U_xy = u_x + sigma log(mu_xy / n_x) and
/// V_xy = v_y + sigma log(mu_xy / m_y).
double frontier_gap(const AggregateMarket& market, const AggregateEquilibrium& eq);

struct WageRecovery {
  Matrix w;
  /// max |U_xy - alpha_xy - N(w_xy)|: the worker-side consistency check.
  double worker_gap = 0.0;
};

/// w_xy = gamma_xy - V_xy, with gamma = phi for TU frontiers. NTU frontiers
/// carry no wage and throw UnsupportedFrontier.
WageRecovery recover_wages(const AggregateMarket& market, const AggregateEquilibrium& eq);

/// Central-difference estimate of dQ_x/dp_y - dQ_y/dp_x for the transfer map
/// of `market` at p, one entry per (x, y).
Matrix check_nonintegrability(const AggregateMarket& market, const PriceVector& p, double fd_step);

}  // namespace zmeq
