#include "zmeq/matching/adachi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zmeq/core/errors.hpp"

namespace zmeq {

namespace {

double worker_update(const IndividualMarket& market, std::size_t i, std::span<const double> p) {
  const std::size_t ni = market.num_workers();
  double best = 0.0;
  for (std::size_t j = 0; j < market.num_firms(); ++j) {
    if (market.gamma()(i, j) >= p[ni + j]) best = std::min(best, -market.alpha()(i, j));
  }
  return best;
}

double firm_update(const IndividualMarket& market, std::size_t j, std::span<const double> p) {
  double best = 0.0;
  for (std::size_t i = 0; i < market.num_workers(); ++i) {
    if (p[i] >= -market.alpha()(i, j)) best = std::max(best, market.gamma()(i, j));
  }
  return best;
}

double next_rung(const IndividualMarket& market, std::size_t i, double pi) {
  double cap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < market.num_firms(); ++j) {
    const double rung = -market.alpha()(i, j);
    if (rung > pi) cap = std::min(cap, rung);
  }
  return cap;
}

void require_market_prices(const IndividualMarket& market, const PriceVector& p) {
  if (!same_coordinates(p.coordinates(), *market.coordinates())) {
    throw InvalidInput("price vector does not live on the market's workers and firms");
  }
}

SweepRecord make_record(const NtMap& q, int sweep, std::span<const double> values, std::span<const double> previous) {
  SweepRecord r;
  r.sweep = sweep;
  r.values.assign(values.begin(), values.end());
  std::vector<double> qv(values.size());
  q.evaluate(values, qv);
  r.is_subsolution = true;
  r.is_supersolution = true;
  for (std::size_t z = 0; z < qv.size(); ++z) {
    r.residual_sup = std::max(r.residual_sup, std::abs(qv[z]));
    if (qv[z] > 0.0) r.is_subsolution = false;
    if (qv[z] < 0.0) r.is_supersolution = false;
    if (!previous.empty()) {
      if (values[z] < previous[z]) r.nondecreasing = false;
      if (values[z] > previous[z]) r.nonincreasing = false;
    }
  }
  return r;
}

}  // namespace

PriceVector adachi_map(const IndividualMarket& market, const PriceVector& p) {
  require_market_prices(market, p);
  const std::size_t ni = market.num_workers();
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < ni; ++i) out[i] = worker_update(market, i, p.values());
  for (std::size_t j = 0; j < market.num_firms(); ++j) out[ni + j] = firm_update(market, j, p.values());
  return PriceVector(p.coordinates_ptr(), std::move(out));
}

NtMap::NtMap(IndividualMarket market)
    : EquilibriumMap(market.coordinates(), StructureFlags{true, true, false, true}), market_(std::move(market)) {}

double NtMap::residual(std::size_t z, double pi, std::span<const double> p) const {
  const std::size_t ni = market_.num_workers();
  const auto& alpha = market_.alpha();
  const auto& gamma = market_.gamma();
  if (z < ni) {
    double q = (pi >= 0.0 ? 1.0 : 0.0) - 1.0;
    for (std::size_t j = 0; j < market_.num_firms(); ++j) {
      if (pi >= -alpha(z, j) && gamma(z, j) >= p[ni + j]) q += 1.0;
    }
    return q;
  }
  const std::size_t j = z - ni;
  double q = 1.0 - (pi <= 0.0 ? 1.0 : 0.0);
  for (std::size_t i = 0; i < ni; ++i) {
    if (p[i] >= -alpha(i, j) && gamma(i, j) >= pi) q -= 1.0;
  }
  return q;
}

std::optional<double> NtMap::closed_form_update(std::size_t z, std::span<const double> p) const {
  const std::size_t ni = market_.num_workers();
  return z < ni ? worker_update(market_, z, p) : firm_update(market_, z - ni, p);
}

NtMap build_nt_map(const IndividualMarket& market) { return NtMap(market); }

PriceVector adachi_start(const IndividualMarket& market, AdachiStart start) {
  const std::size_t ni = market.num_workers();
  const std::size_t nj = market.num_firms();
  const bool low = start == AdachiStart::worker_optimal;
  auto pick = [low](double a, double b) { return low ? std::min(a, b) : std::max(a, b); };
  std::vector<double> p(ni + nj, 0.0);
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      p[i] = pick(p[i], -market.alpha()(i, j));
      p[ni + j] = pick(p[ni + j], market.gamma()(i, j));
    }
  }
  return PriceVector(market.coordinates(), std::move(p));
}

AdachiResult adachi_solve(const IndividualMarket& market, AdachiStart start) {
  const NtMap q(market);
  PriceVector p = adachi_start(market, start);
  SolveTrace trace;
  trace.coordinates = market.coordinates();
  trace.initial = make_record(q, 0, p.values(), {});
  const std::size_t bound =
      market.num_workers() * market.num_firms() + market.num_workers() + market.num_firms() + 1;
  SolverOptions opts;
  opts.mode = SweepMode::gauss_seidel;
  for (std::size_t t = 1; t <= bound; ++t) {
    PriceVector next = gauss_seidel_sweep(q, p, opts);
    trace.sweeps.push_back(make_record(q, static_cast<int>(t), next.values(), p.values()));
    const bool fixed = std::equal(next.values().begin(), next.values().end(), p.values().begin());
    p = std::move(next);
    if (fixed) return {outcome_from_prices(market, p), p, std::move(trace)};
  }
  throw InternalError("Adachi's algorithm did not reach a fixed point within " + std::to_string(bound) + " sweeps");
}

IndividualOutcome outcome_from_prices(const IndividualMarket& market, const PriceVector& p) {
  require_market_prices(market, p);
  const std::size_t ni = market.num_workers();
  std::vector<int> firm_of(ni, kUnmatched);
  std::vector<bool> taken(market.num_firms(), false);
  for (std::size_t i = 0; i < ni; ++i) {
    if (p[i] == 0.0) continue;
    for (std::size_t j = 0; j < market.num_firms(); ++j) {
      if (-market.alpha()(i, j) == p[i] && market.gamma()(i, j) == p[ni + j] && !taken[j]) {
        firm_of[i] = static_cast<int>(j);
        taken[j] = true;
        break;
      }
    }
    if (firm_of[i] == kUnmatched) {
      throw InternalError("prices do not encode a matching: worker " + market.worker_labels()[i] + " has no partner");
    }
  }
  auto o = outcome_from_matching(market, firm_of);
  for (std::size_t j = 0; j < market.num_firms(); ++j) {
    if (o.v[j] != p[ni + j]) {
      throw InternalError("prices do not encode a matching: firm " + market.firm_labels()[j] + " payoff mismatch");
    }
  }
  return o;
}

PriceVector prices_from_outcome(const IndividualMarket& market, const IndividualOutcome& outcome) {
  const std::size_t ni = market.num_workers();
  if (outcome.u.size() != ni || outcome.v.size() != market.num_firms()) {
    throw InvalidInput("outcome dimensions do not match the market");
  }
  std::vector<double> p(ni + market.num_firms());
  for (std::size_t i = 0; i < ni; ++i) p[i] = -outcome.u[i];
  for (std::size_t j = 0; j < market.num_firms(); ++j) p[ni + j] = outcome.v[j];
  return PriceVector(market.coordinates(), std::move(p));
}

PriceVector damped_step(const IndividualMarket& market, const PriceVector& p) {
  require_market_prices(market, p);
  const std::size_t ni = market.num_workers();
  std::vector<double> next(p.values().begin(), p.values().end());
  for (std::size_t i = 0; i < ni; ++i) {
    next[i] = std::min(worker_update(market, i, p.values()), next_rung(market, i, p[i]));
  }
  std::vector<double> out = next;
  for (std::size_t j = 0; j < market.num_firms(); ++j) out[ni + j] = firm_update(market, j, next);
  return PriceVector(p.coordinates_ptr(), std::move(out));
}

}  // namespace zmeq
