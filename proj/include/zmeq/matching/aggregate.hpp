#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "zmeq/core/errors.hpp"
#include "zmeq/core/matrix.hpp"
#include "zmeq/matching/individual.hpp"

namespace zmeq {

/// n_x workers of type x and m_y firms of type y; a match of types (x, y)
/// gives alpha(x, y) to the worker and gamma(x, y) to the firm.
class AggregateNTMarket {
 public:
  AggregateNTMarket(std::vector<double> n, std::vector<double> m, Matrix alpha, Matrix gamma);
  /// Empty label lists default to x1, x2, ... and y1, y2, ...
  AggregateNTMarket(std::vector<std::string> x_labels, std::vector<std::string> y_labels, std::vector<double> n,
                    std::vector<double> m, Matrix alpha, Matrix gamma);

  std::size_t num_x() const noexcept { return n_.size(); }
  std::size_t num_y() const noexcept { return m_.size(); }
  const std::vector<double>& n() const noexcept { return n_; }
  const std::vector<double>& m() const noexcept { return m_; }
  const Matrix& alpha() const noexcept { return alpha_; }
  const Matrix& gamma() const noexcept { return gamma_; }
  const std::vector<std::string>& x_labels() const noexcept { return x_labels_; }
  const std::vector<std::string>& y_labels() const noexcept { return y_labels_; }

 private:
  std::vector<std::string> x_labels_;
  std::vector<std::string> y_labels_;
  std::vector<double> n_;
  std::vector<double> m_;
  Matrix alpha_;
  Matrix gamma_;
};

struct AggregateNTOutcome {
  Matrix mu;
  std::vector<double> mu_x0;
  std::vector<double> mu_0y;
  std::vector<double> u;
  std::vector<double> v;
};

/// Feasibility, stability and weak complementarity, each within tol.
/// Mass balances are compared relative to 1 + the type's mass.
std::vector<Violation> is_equilibrium_matching(const AggregateNTMarket& market, const AggregateNTOutcome& outcome,
                                               double tol = 1e-9);

/// Each row spends its budget n_x on cells in decreasing alpha, up to the
/// cap available(x, y), skipping negative alpha. Ties go to the lower column.
Matrix proposal_phase(const Matrix& available, const Matrix& alpha, std::span<const double> n);

/// Each column keeps up to m_y of the proposed mass in decreasing gamma,
/// skipping negative gamma. Ties go to the lower row.
Matrix disposal_phase(const Matrix& proposed, const Matrix& gamma, std::span<const double> m);

struct DalmRound {
  Matrix available;
  Matrix proposed;
  Matrix kept;
};

struct DalmOptions {
  int max_rounds = 10000;
};

struct DalmResult {
  AggregateNTOutcome outcome;
  std::vector<DalmRound> rounds;
};

class MaxRoundsExceeded : public Error {
 public:
  MaxRoundsExceeded(std::vector<DalmRound> rounds, const std::string& detail);

  const std::vector<DalmRound>& rounds() const noexcept { return rounds_; }

 private:
  std::vector<DalmRound> rounds_;
};

/// Deferred acceptance on masses. Stops when the rejected mass is at most
/// 1e-12 (1 + max initial availability). The matching is the kept mass of
/// the last round. u_x is 0 when the row has slack and otherwise the lowest
/// alpha among its filled cells; v_y likewise with gamma.
DalmResult dalm(const AggregateNTMarket& market, const DalmOptions& opts = {});

/// Singleton types with unit masses.
AggregateNTMarket lift_market(const IndividualMarket& market);
AggregateNTOutcome lift_outcome(const IndividualMarket& market, const IndividualOutcome& outcome);

/// Per worker, the firm carrying more than half a unit, or kUnmatched.
std::vector<int> rounded_matching(const AggregateNTOutcome& outcome);

}  // namespace zmeq
