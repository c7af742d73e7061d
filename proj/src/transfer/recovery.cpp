#include "zmeq/transfer/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "zmeq/core/errors.hpp"
#include "zmeq/core/solver.hpp"

namespace zmeq {

namespace {

constexpr int kMaxDoublings = 1100;

// Smallest 2^k (k >= 0) with pred true; sign flips the search direction.
double doubling_search(double sign, const std::function<bool(double)>& pred) {
  double v = 1.0;
  for (int k = 0; k < kMaxDoublings && std::isfinite(v); ++k, v *= 2.0) {
    if (pred(sign * v)) return sign * v;
  }
  throw InternalError("doubling search found no large enough price");
}

// Smallest margin in {1e-9, 2e-9, ...} for which pred holds.
double margin_search(const std::function<bool(double)>& pred) {
  double margin = 1e-9;
  for (int k = 0; k < 60; ++k, margin *= 2.0) {
    if (pred(margin)) return margin;
  }
  throw InternalError("no margin makes the construction hold");
}

void require_singles(const TwoSidedMap& q) {
  if (!q.market().singles()) throw InvalidInput("construction needs a market with singles");
}

PriceVector verified(const TwoSidedMap& q, std::vector<double> p, bool super) {
  PriceVector out(q.coordinates(), std::move(p));
  if (super ? !is_supersolution(q, out) : !is_subsolution(q, out)) {
    throw InternalError(std::string("constructed point is not a ") + (super ? "supersolution" : "subsolution"));
  }
  return out;
}

}  // namespace

PriceVector singles_supersolution(const TwoSidedMap& q) {
  require_singles(q);
  const auto& mk = q.market();
  const std::size_t nx = mk.num_x();
  std::vector<double> p(q.size(), 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    const double base = std::log(mk.n()[x]);
    margin_search([&](double margin) {
      p[x] = mk.sigma() * (base + margin);
      return q.residual(x, p[x], p) >= 0.0;
    });
  }
  for (std::size_t z = nx; z < q.size(); ++z) {
    p[z] = doubling_search(1.0, [&](double v) { return q.residual(z, v, p) >= 0.0; });
  }
  return verified(q, std::move(p), true);
}

PriceVector singles_subsolution(const TwoSidedMap& q) {
  require_singles(q);
  const auto& mk = q.market();
  const std::size_t nx = mk.num_x();
  std::vector<double> p(q.size(), 0.0);
  for (std::size_t z = nx; z < q.size(); ++z) {
    const double base = std::log(mk.m()[z - nx]);
    margin_search([&](double margin) {
      p[z] = -mk.sigma() * (base + margin);
      return q.residual(z, p[z], p) <= 0.0;
    });
  }
  for (std::size_t x = 0; x < nx; ++x) {
    p[x] = doubling_search(-1.0, [&](double v) { return q.residual(x, v, p) <= 0.0; });
  }
  return verified(q, std::move(p), false);
}

PriceVector full_assignment_supersolution(const TwoSidedMap& q) {
  if (!q.pinned_y()) throw InvalidInput("construction needs a full-assignment map");
  const auto& mk = q.market();
  const std::size_t nx = mk.num_x();
  const std::size_t y0 = *q.pinned_y();
  std::vector<double> p(q.size(), 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    const double log_n = mk.sigma() * std::log(mk.n()[x]);
    const double ux = frontier_u(mk.frontier(x, y0), q.pinned_price() + log_n);
    // Q_x >= exp(-D_{x y0}(-p_x, pi) / sigma) - n_x >= 0 whatever the other prices.
    margin_search([&](double margin) {
      p[x] = log_n - ux + mk.sigma() * margin;
      return q.log_flow(x, y0, p[x], q.pinned_price()) >= std::log(mk.n()[x]);
    });
  }
  for (std::size_t z = nx; z < q.size(); ++z) {
    p[z] = doubling_search(1.0, [&](double v) { return q.residual(z, v, p) >= 0.0; });
  }
  return verified(q, std::move(p), true);
}

AggregateEquilibrium recover_equilibrium(const TwoSidedMap& q, const PriceVector& p) {
  const auto full = q.expand(p);
  const auto& mk = q.market();
  const std::size_t nx = mk.num_x();
  const std::size_t ny = mk.num_y();
  AggregateEquilibrium eq;
  eq.mu = Matrix(nx, ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) eq.mu(x, y) = std::exp(q.log_flow(x, y, full[x], full[nx + y]));
    eq.u.push_back(q.worker_payoff(x, full[x]));
  }
  for (std::size_t y = 0; y < ny; ++y) eq.v.push_back(q.firm_payoff(y, full[nx + y]));
  if (mk.singles()) {
    for (std::size_t x = 0; x < nx; ++x) eq.mu_x0.push_back(std::exp(q.log_single_x(full[x])));
    for (std::size_t y = 0; y < ny; ++y) eq.mu_0y.push_back(std::exp(q.log_single_y(full[nx + y])));
  }
  return eq;
}

double feasibility_residual(const AggregateMarket& market, const AggregateEquilibrium& eq) {
  double worst = 0.0;
  for (std::size_t x = 0; x < market.num_x(); ++x) {
    double s = eq.mu_x0.empty() ? 0.0 : eq.mu_x0[x];
    for (std::size_t y = 0; y < market.num_y(); ++y) s += eq.mu(x, y);
    worst = std::max(worst, std::abs(s - market.n()[x]));
  }
  for (std::size_t y = 0; y < market.num_y(); ++y) {
    double s = eq.mu_0y.empty() ? 0.0 : eq.mu_0y[y];
    for (std::size_t x = 0; x < market.num_x(); ++x) s += eq.mu(x, y);
    worst = std::max(worst, std::abs(s - market.m()[y]));
  }
  return worst;
}

namespace {

double cell_u(const AggregateMarket& market, const AggregateEquilibrium& eq, std::size_t x, std::size_t y) {
  return eq.u[x] + market.sigma() * std::log(eq.mu(x, y) / market.n()[x]);
}

double cell_v(const AggregateMarket& market, const AggregateEquilibrium& eq, std::size_t x, std::size_t y) {
  return eq.v[y] + market.sigma() * std::log(eq.mu(x, y) / market.m()[y]);
}

}  // namespace

double frontier_gap(const AggregateMarket& market, const AggregateEquilibrium& eq) {
  double worst = 0.0;
  for (std::size_t x = 0; x < market.num_x(); ++x) {
    for (std::size_t y = 0; y < market.num_y(); ++y) {
      const double d = distance(market.frontier(x, y), cell_u(market, eq, x, y), cell_v(market, eq, x, y));
      worst = std::max(worst, std::abs(d));
    }
  }
  return worst;
}

WageRecovery recover_wages(const AggregateMarket& market, const AggregateEquilibrium& eq) {
  WageRecovery out;
  out.w = Matrix(market.num_x(), market.num_y());
  for (std::size_t x = 0; x < market.num_x(); ++x) {
    for (std::size_t y = 0; y < market.num_y(); ++y) {
      const auto& f = market.frontier(x, y);
      const double u = cell_u(market, eq, x, y);
      const double v = cell_v(market, eq, x, y);
      double alpha = 0.0;
      double gamma = 0.0;
      TaxSchedule schedule;
      if (const auto* tu = std::get_if<TuFrontier>(&f)) {
        gamma = tu->phi;
      } else if (const auto* tax = std::get_if<TaxFrontier>(&f)) {
        alpha = tax->alpha;
        gamma = tax->gamma;
        schedule = tax->schedule;
      } else {
        throw UnsupportedFrontier("wages are not defined for NTU frontiers");
      }
      const double w = gamma - v;
      out.w(x, y) = w;
      out.worker_gap = std::max(out.worker_gap, std::abs(u - alpha - net_wage(schedule, w)));
    }
  }
  return out;
}

Matrix check_nonintegrability(const AggregateMarket& market, const PriceVector& p, double fd_step) {
  if (!(fd_step > 0.0)) throw InvalidInput("finite-difference step must be positive");
  const auto q = build_transfer_map(market);
  if (!same_coordinates(p.coordinates(), *q.coordinates())) throw InvalidInput("price vector has the wrong coordinates");
  const std::size_t nx = market.num_x();
  std::vector<double> work(p.values().begin(), p.values().end());
  // dQ_a / dp_b by central differences.
  auto partial = [&](std::size_t a, std::size_t b) {
    const double keep = work[b];
    work[b] = keep + fd_step;
    const double hi = q.residual(a, work[a], work);
    work[b] = keep - fd_step;
    const double lo = q.residual(a, work[a], work);
    work[b] = keep;
    return (hi - lo) / (2.0 * fd_step);
  };
  Matrix out(nx, market.num_y());
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < market.num_y(); ++y) out(x, y) = partial(x, nx + y) - partial(nx + y, x);
  }
  return out;
}

}  // namespace zmeq
