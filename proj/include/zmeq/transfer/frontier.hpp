#pragma once

#include <functional>
#include <variant>
#include <vector>

namespace zmeq {

/// One tax bracket: marginal rate `rate` applies above `threshold`.
struct TaxBracket {
  double rate = 0.0;
  double threshold = 0.0;
};

/// Piecewise-linear income tax. The first rate is 0 and rates increase
/// strictly, staying below 1, so the net wage is a bijection of the reals.
class TaxSchedule {
 public:
  TaxSchedule();  // no taxes: N(w) = w
  explicit TaxSchedule(std::vector<TaxBracket> brackets);

  const std::vector<TaxBracket>& brackets() const noexcept { return brackets_; }

 private:
  std::vector<TaxBracket> brackets_;
};

/// N(w) = min_k (1 - tau_k)(w - w_k).
double net_wage(const TaxSchedule& schedule, double w);

/// The unique w with N(w) = n: max_k (w_k + n / (1 - tau_k)).
double invert_net_wage(const TaxSchedule& schedule, double n);

/// Transferable utility: U + V <= phi.
struct TuFrontier {
  double phi = 0.0;
};

/// Worker gets U = alpha + N(w), firm gets V = gamma - w.
struct TaxFrontier {
  double alpha = 0.0;
  double gamma = 0.0;
  TaxSchedule schedule;
};

/// Non-transferable utility: U <= alpha and V <= gamma.
struct NtuFrontier {
  double alpha = 0.0;
  double gamma = 0.0;
};

using Frontier = std::variant<TuFrontier, TaxFrontier, NtuFrontier>;

/// Smallest t such that (U - t, V - t) is feasible.
double distance(const Frontier& f, double u, double v);

/// Direct membership test, independent of `distance`.
bool is_feasible(const Frontier& f, double u, double v);

/// The half-plane distances D^k whose maximum is the tax distance.
std::vector<double> bracket_distances(const TaxFrontier& f, double u, double v);

/// Largest U with (U, V) feasible; throws UnsupportedFrontier for NTU, whose
/// frontier is not defined above gamma.
double frontier_u(const Frontier& f, double v);

/// Largest V with (U, V) feasible; same restriction as frontier_u.
double frontier_v(const Frontier& f, double u);

/// Checks parameters are finite; throws InvalidInput otherwise.
void validate_frontier(const Frontier& f);

bool is_tu(const Frontier& f) noexcept;

using DistanceFn = std::function<double(double u, double v)>;

enum class Combine { intersection, union_of };

/// Distance to the intersection (max of distances) or union (min) of sets.
DistanceFn combine_distances(std::vector<DistanceFn> parts, Combine mode);

}  // namespace zmeq
