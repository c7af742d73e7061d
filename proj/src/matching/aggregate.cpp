#include "zmeq/matching/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace zmeq {

namespace {

std::vector<std::string> numbered(const char* prefix, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<std::size_t> descending_order(std::size_t count, const std::function<double(std::size_t)>& key) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
  return order;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

AggregateNTMarket::AggregateNTMarket(std::vector<double> n, std::vector<double> m, Matrix alpha, Matrix gamma)
    : AggregateNTMarket({}, {}, std::move(n), std::move(m), std::move(alpha), std::move(gamma)) {}

AggregateNTMarket::AggregateNTMarket(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                                     std::vector<double> n, std::vector<double> m, Matrix alpha, Matrix gamma)
    : x_labels_(std::move(x_labels)),
      y_labels_(std::move(y_labels)),
      n_(std::move(n)),
      m_(std::move(m)),
      alpha_(std::move(alpha)),
      gamma_(std::move(gamma)) {
  if (n_.empty() || m_.empty()) throw InvalidInput("market needs at least one type on each side");
  if (x_labels_.empty()) x_labels_ = numbered("x", n_.size());
  if (y_labels_.empty()) y_labels_ = numbered("y", m_.size());
  if (alpha_.rows() != n_.size() || alpha_.cols() != m_.size() || gamma_.rows() != n_.size() ||
      gamma_.cols() != m_.size()) {
    throw InvalidInput("alpha and gamma must be |X| x |Y|");
  }
  if (x_labels_.size() != n_.size() || y_labels_.size() != m_.size()) {
    throw InvalidInput("label count does not match the masses");
  }
  for (double w : n_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("worker masses must be positive and finite");
  }
  for (double w : m_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("firm masses must be positive and finite");
  }
  for (std::size_t k = 0; k < alpha_.data().size(); ++k) {
    if (!std::isfinite(alpha_.data()[k]) || !std::isfinite(gamma_.data()[k])) {
      throw InvalidInput("utilities must be finite");
    }
  }
  std::vector<std::string> all = x_labels_;
  all.insert(all.end(), y_labels_.begin(), y_labels_.end());
  make_coordinates(std::move(all));
}

std::vector<Violation> is_equilibrium_matching(const AggregateNTMarket& market, const AggregateNTOutcome& o,
                                               double tol) {
  const std::size_t nx = market.num_x();
  const std::size_t ny = market.num_y();
  std::vector<Violation> out;
  if (o.mu.rows() != nx || o.mu.cols() != ny || o.mu_x0.size() != nx || o.mu_0y.size() != ny || o.u.size() != nx ||
      o.v.size() != ny) {
    out.push_back({MatchingCondition::feasibility, -1, -1, "outcome dimensions do not match the market"});
    return out;
  }
  const int none = -1;
  for (std::size_t x = 0; x < nx; ++x) {
    double total = o.mu_x0[x];
    if (o.mu_x0[x] < -tol) out.push_back({MatchingCondition::feasibility, int(x), none, "mu_x0 < 0"});
    for (std::size_t y = 0; y < ny; ++y) {
      total += o.mu(x, y);
      if (o.mu(x, y) < -tol) out.push_back({MatchingCondition::feasibility, int(x), int(y), "mu_xy < 0"});
    }
    if (!near(total, market.n()[x], tol * (1.0 + market.n()[x]))) {
      out.push_back({MatchingCondition::feasibility, int(x), none, "row mass does not add up to n_x"});
    }
  }
  for (std::size_t y = 0; y < ny; ++y) {
    double total = o.mu_0y[y];
    if (o.mu_0y[y] < -tol) out.push_back({MatchingCondition::feasibility, none, int(y), "mu_0y < 0"});
    for (std::size_t x = 0; x < nx; ++x) total += o.mu(x, y);
    if (!near(total, market.m()[y], tol * (1.0 + market.m()[y]))) {
      out.push_back({MatchingCondition::feasibility, none, int(y), "column mass does not add up to m_y"});
    }
  }
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double d = std::max(o.u[x] - market.alpha()(x, y), o.v[y] - market.gamma()(x, y));
      if (d < -tol) {
        out.push_back({MatchingCondition::blocking_pair, int(x), int(y),
                       "types " + market.x_labels()[x] + " and " + market.y_labels()[y] + " block"});
      }
      if (o.mu(x, y) > tol && std::abs(d) > tol) {
        out.push_back({MatchingCondition::weak_complementarity, int(x), int(y),
                       "matched types " + market.x_labels()[x] + " and " + market.y_labels()[y] +
                           " have max(u - alpha, v - gamma) != 0"});
      }
    }
  }
  for (std::size_t x = 0; x < nx; ++x) {
    if (o.u[x] < -tol) out.push_back({MatchingCondition::negative_payoff, int(x), none, "u < 0"});
    if (o.mu_x0[x] > tol && std::abs(o.u[x]) > tol) {
      out.push_back({MatchingCondition::unmatched_payoff, int(x), none, "unmatched workers with u != 0"});
    }
  }
  for (std::size_t y = 0; y < ny; ++y) {
    if (o.v[y] < -tol) out.push_back({MatchingCondition::negative_payoff, none, int(y), "v < 0"});
    if (o.mu_0y[y] > tol && std::abs(o.v[y]) > tol) {
      out.push_back({MatchingCondition::unmatched_payoff, none, int(y), "unmatched firms with v != 0"});
    }
  }
  return out;
}

Matrix proposal_phase(const Matrix& available, const Matrix& alpha, std::span<const double> n) {
  if (available.rows() != alpha.rows() || available.cols() != alpha.cols() || n.size() != alpha.rows()) {
    throw InvalidInput("proposal phase: shapes do not agree");
  }
  Matrix out(alpha.rows(), alpha.cols());
  for (std::size_t x = 0; x < alpha.rows(); ++x) {
    double budget = n[x];
    for (std::size_t y : descending_order(alpha.cols(), [&](std::size_t k) { return alpha(x, k); })) {
      if (budget <= 0.0 || alpha(x, y) < 0.0) break;
      const double take = std::min(budget, std::max(available(x, y), 0.0));
      out(x, y) = take;
      budget -= take;
    }
  }
  return out;
}

Matrix disposal_phase(const Matrix& proposed, const Matrix& gamma, std::span<const double> m) {
  if (proposed.rows() != gamma.rows() || proposed.cols() != gamma.cols() || m.size() != gamma.cols()) {
    throw InvalidInput("disposal phase: shapes do not agree");
  }
  Matrix out(gamma.rows(), gamma.cols());
  for (std::size_t y = 0; y < gamma.cols(); ++y) {
    double room = m[y];
    for (std::size_t x : descending_order(gamma.rows(), [&](std::size_t k) { return gamma(k, y); })) {
      if (room <= 0.0 || gamma(x, y) < 0.0) break;
      const double keep = std::min(room, std::max(proposed(x, y), 0.0));
      out(x, y) = keep;
      room -= keep;
    }
  }
  return out;
}

MaxRoundsExceeded::MaxRoundsExceeded(std::vector<DalmRound> rounds, const std::string& detail)
    : Error(detail), rounds_(std::move(rounds)) {}

DalmResult dalm(const AggregateNTMarket& market, const DalmOptions& opts) {
  if (opts.max_rounds < 1) throw InvalidInput("max_rounds must be positive");
  const std::size_t nx = market.num_x();
  const std::size_t ny = market.num_y();
  Matrix available(nx, ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) available(x, y) = std::min(market.n()[x], market.m()[y]);
  }
  const double stop = 1e-12 * (1.0 + available.max_abs());
  DalmResult result;
  bool converged = false;
  for (int t = 0; t < opts.max_rounds && !converged; ++t) {
    DalmRound round;
    round.available = available;
    round.proposed = proposal_phase(available, market.alpha(), market.n());
    round.kept = disposal_phase(round.proposed, market.gamma(), market.m());
    double rejected = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double r = round.proposed(x, y) - round.kept(x, y);
        rejected = std::max(rejected, r);
        available(x, y) = std::max(available(x, y) - r, 0.0);
      }
    }
    converged = rejected <= stop;
    result.rounds.push_back(std::move(round));
  }
  if (!converged) {
    throw MaxRoundsExceeded(std::move(result.rounds),
                            "DALM did not settle within " + std::to_string(opts.max_rounds) + " rounds");
  }

  const Matrix& kept = result.rounds.back().kept;
  AggregateNTOutcome& o = result.outcome;
  o.mu = kept;
  o.mu_x0.assign(nx, 0.0);
  o.mu_0y.assign(ny, 0.0);
  o.u.assign(nx, 0.0);
  o.v.assign(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    double filled = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < ny; ++y) {
      filled += kept(x, y);
      if (kept(x, y) > stop) lowest = std::min(lowest, market.alpha()(x, y));
    }
    o.mu_x0[x] = std::max(market.n()[x] - filled, 0.0);
    if (o.mu_x0[x] <= 1e-9 * (1.0 + market.n()[x]) && std::isfinite(lowest)) o.u[x] = std::max(lowest, 0.0);
  }
  for (std::size_t y = 0; y < ny; ++y) {
    double filled = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < nx; ++x) {
      filled += kept(x, y);
      if (kept(x, y) > stop) lowest = std::min(lowest, market.gamma()(x, y));
    }
    o.mu_0y[y] = std::max(market.m()[y] - filled, 0.0);
    if (o.mu_0y[y] <= 1e-9 * (1.0 + market.m()[y]) && std::isfinite(lowest)) o.v[y] = std::max(lowest, 0.0);
  }
  return result;
}

AggregateNTMarket lift_market(const IndividualMarket& market) {
  return AggregateNTMarket(market.worker_labels(), market.firm_labels(), std::vector<double>(market.num_workers(), 1.0),
                           std::vector<double>(market.num_firms(), 1.0), market.alpha(), market.gamma());
}

AggregateNTOutcome lift_outcome(const IndividualMarket& market, const IndividualOutcome& outcome) {
  AggregateNTOutcome o;
  o.mu = Matrix(market.num_workers(), market.num_firms());
  o.mu_x0.assign(market.num_workers(), 1.0);
  o.mu_0y.assign(market.num_firms(), 1.0);
  for (std::size_t i = 0; i < outcome.firm_of.size(); ++i) {
    const int j = outcome.firm_of[i];
    if (j == kUnmatched) continue;
    o.mu(i, j) = 1.0;
    o.mu_x0[i] = 0.0;
    o.mu_0y[j] = 0.0;
  }
  o.u = outcome.u;
  o.v = outcome.v;
  return o;
}

std::vector<int> rounded_matching(const AggregateNTOutcome& outcome) {
  std::vector<int> firm_of(outcome.mu.rows(), kUnmatched);
  for (std::size_t x = 0; x < outcome.mu.rows(); ++x) {
    for (std::size_t y = 0; y < outcome.mu.cols(); ++y) {
      if (outcome.mu(x, y) > 0.5) firm_of[x] = static_cast<int>(y);
    }
  }
  return firm_of;
}

}  // namespace zmeq
