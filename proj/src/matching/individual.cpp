#include "zmeq/matching/individual.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "zmeq/core/errors.hpp"

namespace zmeq {

namespace {

std::vector<std::string> numbered(const char* prefix, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::string pair_text(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

template <class Get>
void require_distinct_nonzero(std::size_t count, std::size_t len, Get get, const char* what) {
  for (std::size_t k = 0; k < count; ++k) {
    std::set<double> seen;
    for (std::size_t l = 0; l < len; ++l) {
      const double v = get(k, l);
      if (v == 0.0) throw InvalidInput(std::string(what) + " has a zero entry (indifference with being single)");
      if (!seen.insert(v).second) throw InvalidInput(std::string(what) + " has a repeated value (indifference)");
    }
  }
}

}  // namespace

IndividualMarket::IndividualMarket(Matrix alpha, Matrix gamma, Validation validation)
    : IndividualMarket({}, {}, std::move(alpha), std::move(gamma), validation) {}

IndividualMarket::IndividualMarket(std::vector<std::string> worker_labels, std::vector<std::string> firm_labels,
                                   Matrix alpha, Matrix gamma, Validation validation)
    : alpha_(std::move(alpha)),
      gamma_(std::move(gamma)),
      worker_labels_(std::move(worker_labels)),
      firm_labels_(std::move(firm_labels)) {
  if (alpha_.rows() == 0 || alpha_.cols() == 0) throw InvalidInput("market needs at least one worker and one firm");
  if (worker_labels_.empty()) worker_labels_ = numbered("i", alpha_.rows());
  if (firm_labels_.empty()) firm_labels_ = numbered("j", alpha_.cols());
  if (gamma_.rows() != alpha_.rows() || gamma_.cols() != alpha_.cols()) {
    throw InvalidInput("alpha and gamma must have the same shape");
  }
  if (worker_labels_.size() != alpha_.rows() || firm_labels_.size() != alpha_.cols()) {
    throw InvalidInput("label count does not match the utility matrices");
  }
  for (std::size_t k = 0; k < alpha_.data().size(); ++k) {
    if (!std::isfinite(alpha_.data()[k]) || !std::isfinite(gamma_.data()[k])) {
      throw InvalidInput("utilities must be finite");
    }
  }
  if (validation == Validation::strict) {
    require_distinct_nonzero(num_workers(), num_firms(), [this](std::size_t i, std::size_t j) { return alpha_(i, j); },
                             "a row of alpha");
    require_distinct_nonzero(num_firms(), num_workers(), [this](std::size_t j, std::size_t i) { return gamma_(i, j); },
                             "a column of gamma");
  }
  std::vector<std::string> all = worker_labels_;
  all.insert(all.end(), firm_labels_.begin(), firm_labels_.end());
  coords_ = make_coordinates(std::move(all));
}

IndividualOutcome outcome_from_matching(const IndividualMarket& market, const std::vector<int>& firm_of) {
  if (firm_of.size() != market.num_workers()) throw InvalidInput("matching size does not match the workers");
  IndividualOutcome o;
  o.firm_of = firm_of;
  o.worker_of.assign(market.num_firms(), kUnmatched);
  o.u.assign(market.num_workers(), 0.0);
  o.v.assign(market.num_firms(), 0.0);
  for (std::size_t i = 0; i < firm_of.size(); ++i) {
    const int j = firm_of[i];
    if (j == kUnmatched) continue;
    if (j < 0 || static_cast<std::size_t>(j) >= market.num_firms()) throw InvalidInput("firm index out of range");
    if (o.worker_of[j] != kUnmatched) throw InvalidInput("firm " + std::to_string(j) + " is matched twice");
    o.worker_of[j] = static_cast<int>(i);
    o.u[i] = market.alpha()(i, j);
    o.v[j] = market.gamma()(i, j);
  }
  return o;
}

const char* condition_name(MatchingCondition c) noexcept {
  switch (c) {
    case MatchingCondition::feasibility: return "feasibility";
    case MatchingCondition::blocking_pair: return "blocking_pair";
    case MatchingCondition::negative_payoff: return "negative_payoff";
    case MatchingCondition::strong_complementarity: return "strong_complementarity";
    case MatchingCondition::weak_complementarity: return "weak_complementarity";
    case MatchingCondition::unmatched_payoff: return "unmatched_payoff";
  }
  return "unknown";
}

std::vector<Violation> is_stable(const IndividualMarket& market, const IndividualOutcome& o) {
  const std::size_t ni = market.num_workers();
  const std::size_t nj = market.num_firms();
  std::vector<Violation> out;
  if (o.firm_of.size() != ni || o.worker_of.size() != nj || o.u.size() != ni || o.v.size() != nj) {
    out.push_back({MatchingCondition::feasibility, -1, -1, "outcome dimensions do not match the market"});
    return out;
  }
  for (std::size_t i = 0; i < ni; ++i) {
    const int j = o.firm_of[i];
    if (j != kUnmatched && (j < 0 || static_cast<std::size_t>(j) >= nj || o.worker_of[j] != static_cast<int>(i))) {
      out.push_back({MatchingCondition::feasibility, static_cast<int>(i), j, "worker and firm disagree on the match"});
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    const int i = o.worker_of[j];
    if (i != kUnmatched && (i < 0 || static_cast<std::size_t>(i) >= ni || o.firm_of[i] != static_cast<int>(j))) {
      out.push_back({MatchingCondition::feasibility, i, static_cast<int>(j), "worker and firm disagree on the match"});
    }
  }
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      if (std::max(o.u[i] - market.alpha()(i, j), o.v[j] - market.gamma()(i, j)) < 0.0) {
        out.push_back({MatchingCondition::blocking_pair, static_cast<int>(i), static_cast<int>(j),
                       "pair " + pair_text(i, j) + " blocks"});
      }
    }
  }
  for (std::size_t i = 0; i < ni; ++i) {
    if (o.u[i] < 0.0) out.push_back({MatchingCondition::negative_payoff, static_cast<int>(i), -1, "u < 0"});
  }
  for (std::size_t j = 0; j < nj; ++j) {
    if (o.v[j] < 0.0) out.push_back({MatchingCondition::negative_payoff, -1, static_cast<int>(j), "v < 0"});
  }
  for (std::size_t i = 0; i < ni; ++i) {
    const int j = o.firm_of[i];
    if (j == kUnmatched) {
      if (o.u[i] != 0.0) out.push_back({MatchingCondition::unmatched_payoff, static_cast<int>(i), -1, "single with u != 0"});
    } else if (o.u[i] != market.alpha()(i, j) || o.v[j] != market.gamma()(i, j)) {
      out.push_back({MatchingCondition::strong_complementarity, static_cast<int>(i), j,
                     "matched pair " + pair_text(i, j) + " does not receive its match utilities"});
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    if (o.worker_of[j] == kUnmatched && o.v[j] != 0.0) {
      out.push_back({MatchingCondition::unmatched_payoff, -1, static_cast<int>(j), "single with v != 0"});
    }
  }
  return out;
}

DaResult deferred_acceptance_traced(const IndividualMarket& market) {
  const std::size_t ni = market.num_workers();
  const std::size_t nj = market.num_firms();
  const auto& alpha = market.alpha();
  const auto& gamma = market.gamma();
  std::vector<std::vector<bool>> available(ni, std::vector<bool>(nj, true));
  DaResult result;
  while (true) {
    DaRound round;
    round.available = available;
    round.proposal.assign(ni, kUnmatched);
    for (std::size_t i = 0; i < ni; ++i) {
      int best = kUnmatched;
      for (std::size_t j = 0; j < nj; ++j) {
        if (available[i][j] && (best == kUnmatched || alpha(i, j) > alpha(i, best))) best = static_cast<int>(j);
      }
      if (best != kUnmatched && alpha(i, best) >= 0.0) round.proposal[i] = best;
    }
    round.kept.assign(nj, kUnmatched);
    for (std::size_t i = 0; i < ni; ++i) {
      const int j = round.proposal[i];
      if (j == kUnmatched) continue;
      const int held = round.kept[j];
      if (held == kUnmatched || gamma(i, j) > gamma(held, j)) round.kept[j] = static_cast<int>(i);
    }
    for (std::size_t j = 0; j < nj; ++j) {
      if (round.kept[j] != kUnmatched && gamma(round.kept[j], j) < 0.0) round.kept[j] = kUnmatched;
    }
    bool changed = false;
    for (std::size_t i = 0; i < ni; ++i) {
      const int j = round.proposal[i];
      if (j != kUnmatched && round.kept[j] != static_cast<int>(i)) {
        available[i][j] = false;
        changed = true;
      }
    }
    result.rounds.push_back(std::move(round));
    if (!changed) break;
  }
  std::vector<int> firm_of(ni, kUnmatched);
  const auto& last = result.rounds.back();
  for (std::size_t j = 0; j < nj; ++j) {
    if (last.kept[j] != kUnmatched) firm_of[last.kept[j]] = static_cast<int>(j);
  }
  result.outcome = outcome_from_matching(market, firm_of);
  return result;
}

IndividualOutcome deferred_acceptance(const IndividualMarket& market) {
  return deferred_acceptance_traced(market).outcome;
}

std::vector<IndividualOutcome> enumerate_stable(const IndividualMarket& market) {
  const std::size_t ni = market.num_workers();
  const std::size_t nj = market.num_firms();
  if (ni > kEnumerationLimit || nj > kEnumerationLimit) {
    std::ostringstream msg;
    msg << "enumeration is limited to " << kEnumerationLimit << " workers and firms, got " << ni << " x " << nj;
    throw InstanceTooLarge(msg.str());
  }
  std::vector<IndividualOutcome> stable;
  std::vector<int> firm_of(ni, kUnmatched);
  std::vector<bool> used(nj, false);
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (i == ni) {
      auto o = outcome_from_matching(market, firm_of);
      if (is_stable(market, o).empty()) stable.push_back(std::move(o));
      return;
    }
    firm_of[i] = kUnmatched;
    visit(i + 1);
    for (std::size_t j = 0; j < nj; ++j) {
      if (used[j]) continue;
      used[j] = true;
      firm_of[i] = static_cast<int>(j);
      visit(i + 1);
      used[j] = false;
    }
    firm_of[i] = kUnmatched;
  };
  visit(0);
  return stable;
}

namespace {

IndividualOutcome combine_I(const IndividualMarket& market, const IndividualOutcome& a, const IndividualOutcome& b,
                            bool meet) {
  if (a.firm_of.size() != market.num_workers() || b.firm_of.size() != market.num_workers()) {
    throw InvalidInput("outcome dimensions do not match the market");
  }
  std::vector<int> firm_of(market.num_workers());
  for (std::size_t i = 0; i < firm_of.size(); ++i) {
    const bool take_a = meet ? a.u[i] <= b.u[i] : a.u[i] > b.u[i];
    firm_of[i] = take_a ? a.firm_of[i] : b.firm_of[i];
  }
  try {
    return outcome_from_matching(market, firm_of);
  } catch (const InvalidInput& e) {
    throw InternalError(std::string("lattice operation produced an infeasible matching: ") + e.what());
  }
}

}  // namespace

IndividualOutcome lattice_meet_I(const IndividualMarket& market, const IndividualOutcome& a,
                                 const IndividualOutcome& b) {
  return combine_I(market, a, b, true);
}

IndividualOutcome lattice_join_I(const IndividualMarket& market, const IndividualOutcome& a,
                                 const IndividualOutcome& b) {
  return combine_I(market, a, b, false);
}

}  // namespace zmeq
