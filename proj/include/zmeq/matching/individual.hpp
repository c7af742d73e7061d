#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zmeq/core/matrix.hpp"
#include "zmeq/core/price_vector.hpp"

namespace zmeq {

/// One-to-one market without transfers: worker i gets alpha(i, j) and firm j
/// gets gamma(i, j) if they match, both get 0 unmatched.
class IndividualMarket {
 public:
  enum class Validation { strict, none };

  /// Strict validation enforces no indifference: each row of alpha and each
  /// column of gamma holds distinct nonzero values.
  IndividualMarket(Matrix alpha, Matrix gamma, Validation validation = Validation::strict);
  /// Empty label lists default to i1, i2, ... and j1, j2, ...
  IndividualMarket(std::vector<std::string> worker_labels, std::vector<std::string> firm_labels, Matrix alpha,
                   Matrix gamma, Validation validation = Validation::strict);

  std::size_t num_workers() const noexcept { return alpha_.rows(); }
  std::size_t num_firms() const noexcept { return alpha_.cols(); }
  const Matrix& alpha() const noexcept { return alpha_; }
  const Matrix& gamma() const noexcept { return gamma_; }
  const std::vector<std::string>& worker_labels() const noexcept { return worker_labels_; }
  const std::vector<std::string>& firm_labels() const noexcept { return firm_labels_; }

  /// Workers then firms.
  const CoordinatesPtr& coordinates() const noexcept { return coords_; }

 private:
  Matrix alpha_;
  Matrix gamma_;
  std::vector<std::string> worker_labels_;
  std::vector<std::string> firm_labels_;
  CoordinatesPtr coords_;
};

inline constexpr int kUnmatched = -1;

struct IndividualOutcome {
  std::vector<int> firm_of;    // per worker, kUnmatched if single
  std::vector<int> worker_of;  // per firm, kUnmatched if single
  std::vector<double> u;
  std::vector<double> v;

  friend bool operator==(const IndividualOutcome&, const IndividualOutcome&) = default;
};

/// Outcome whose payoffs follow from the matching by strong complementarity.
/// Throws InvalidInput if a firm is assigned twice.
IndividualOutcome outcome_from_matching(const IndividualMarket& market, const std::vector<int>& firm_of);

enum class MatchingCondition {
  feasibility,
  blocking_pair,
  negative_payoff,
  strong_complementarity,
  weak_complementarity,
  unmatched_payoff,
};

const char* condition_name(MatchingCondition c) noexcept;

/// One failed condition. `worker` and `firm` are -1 when not applicable.
struct Violation {
  MatchingCondition condition;
  int worker = -1;
  int firm = -1;
  std::string detail;
};

/// All stability violations, compared exactly.
std::vector<Violation> is_stable(const IndividualMarket& market, const IndividualOutcome& outcome);

struct DaRound {
  std::vector<int> proposal;                   // per worker, kUnmatched if none
  std::vector<int> kept;                       // per firm, kUnmatched if none
  std::vector<std::vector<bool>> available;    // before the round, [i][j]
};

struct DaResult {
  IndividualOutcome outcome;
  std::vector<DaRound> rounds;
};

/// Worker-proposing deferred acceptance. Ties go to the lower index.
DaResult deferred_acceptance_traced(const IndividualMarket& market);
IndividualOutcome deferred_acceptance(const IndividualMarket& market);

inline constexpr std::size_t kEnumerationLimit = 7;

/// Every stable outcome, by exhaustive search over matchings. Markets with
/// more than kEnumerationLimit workers or firms throw InstanceTooLarge.
std::vector<IndividualOutcome> enumerate_stable(const IndividualMarket& market);

/// Each worker keeps the partner from the outcome it likes less (meet) or
/// more (join); ties go to the first outcome for meet and the second for join.
IndividualOutcome lattice_meet_I(const IndividualMarket& market, const IndividualOutcome& a,
                                 const IndividualOutcome& b);
IndividualOutcome lattice_join_I(const IndividualMarket& market, const IndividualOutcome& a,
                                 const IndividualOutcome& b);

}  // namespace zmeq
