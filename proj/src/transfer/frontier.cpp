#include "zmeq/transfer/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zmeq/core/errors.hpp"

namespace zmeq {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string("frontier parameter ") + what + " must be finite");
}

// Shared by distance and is_feasible so the two agree bit for bit:
// bracket k is satisfied iff (U - alpha) <= (1 - tau_k)((gamma - V) - w_k).
double bracket_rhs(const TaxBracket& b, double gross) { return (1.0 - b.rate) * (gross - b.threshold); }

}  // namespace

TaxSchedule::TaxSchedule() : brackets_{{0.0, 0.0}} {}

TaxSchedule::TaxSchedule(std::vector<TaxBracket> brackets) : brackets_(std::move(brackets)) {
  if (brackets_.empty()) throw InvalidInput("tax schedule needs at least one bracket");
  if (brackets_.front().rate != 0.0) throw InvalidInput("first tax rate must be 0");
  for (std::size_t k = 0; k < brackets_.size(); ++k) {
    const auto& b = brackets_[k];
    if (!std::isfinite(b.rate) || !std::isfinite(b.threshold)) throw InvalidInput("tax bracket must be finite");
    if (b.rate >= 1.0) throw InvalidInput("tax rates must stay below 1");
    if (k > 0 && !(b.rate > brackets_[k - 1].rate)) throw InvalidInput("tax rates must increase strictly");
  }
}

double net_wage(const TaxSchedule& schedule, double w) {
  double n = std::numeric_limits<double>::infinity();
  for (const auto& b : schedule.brackets()) n = std::min(n, bracket_rhs(b, w));
  return n;
}

double invert_net_wage(const TaxSchedule& schedule, double n) {
  double w = -std::numeric_limits<double>::infinity();
  for (const auto& b : schedule.brackets()) w = std::max(w, b.threshold + n / (1.0 - b.rate));
  return w;
}

std::vector<double> bracket_distances(const TaxFrontier& f, double u, double v) {
  const double excess = u - f.alpha;
  const double gross = f.gamma - v;
  std::vector<double> d;
  d.reserve(f.schedule.brackets().size());
  for (const auto& b : f.schedule.brackets()) d.push_back((excess - bracket_rhs(b, gross)) / (2.0 - b.rate));
  return d;
}

double distance(const Frontier& f, double u, double v) {
  return std::visit(Overloaded{
                        [&](const TuFrontier& t) { return ((u + v) - t.phi) / 2.0; },
                        [&](const TaxFrontier& t) {
                          const double excess = u - t.alpha;
                          const double gross = t.gamma - v;
                          double d = -std::numeric_limits<double>::infinity();
                          for (const auto& b : t.schedule.brackets()) {
                            d = std::max(d, (excess - bracket_rhs(b, gross)) / (2.0 - b.rate));
                          }
                          return d;
                        },
                        [&](const NtuFrontier& t) { return std::max(u - t.alpha, v - t.gamma); },
                    },
                    f);
}

bool is_feasible(const Frontier& f, double u, double v) {
  return std::visit(Overloaded{
                        [&](const TuFrontier& t) { return u + v <= t.phi; },
                        [&](const TaxFrontier& t) { return net_wage(t.schedule, t.gamma - v) >= u - t.alpha; },
                        [&](const NtuFrontier& t) { return u <= t.alpha && v <= t.gamma; },
                    },
                    f);
}

double frontier_u(const Frontier& f, double v) {
  return std::visit(Overloaded{
                        [&](const TuFrontier& t) { return t.phi - v; },
                        [&](const TaxFrontier& t) { return t.alpha + net_wage(t.schedule, t.gamma - v); },
                        [&](const NtuFrontier&) -> double {
                          throw UnsupportedFrontier("NTU frontier has no U for every V");
                        },
                    },
                    f);
}

double frontier_v(const Frontier& f, double u) {
  return std::visit(Overloaded{
                        [&](const TuFrontier& t) { return t.phi - u; },
                        [&](const TaxFrontier& t) { return t.gamma - invert_net_wage(t.schedule, u - t.alpha); },
                        [&](const NtuFrontier&) -> double {
                          throw UnsupportedFrontier("NTU frontier has no V for every U");
                        },
                    },
                    f);
}

void validate_frontier(const Frontier& f) {
  std::visit(Overloaded{
                 [](const TuFrontier& t) { require_finite(t.phi, "phi"); },
                 [](const TaxFrontier& t) {
                   require_finite(t.alpha, "alpha");
                   require_finite(t.gamma, "gamma");
                 },
                 [](const NtuFrontier& t) {
                   require_finite(t.alpha, "alpha");
                   require_finite(t.gamma, "gamma");
                 },
             },
             f);
}

bool is_tu(const Frontier& f) noexcept { return std::holds_alternative<TuFrontier>(f); }

DistanceFn combine_distances(std::vector<DistanceFn> parts, Combine mode) {
  if (parts.empty()) throw InvalidInput("cannot combine an empty list of distances");
  return [parts = std::move(parts), mode](double u, double v) {
    double d = parts.front()(u, v);
    for (std::size_t k = 1; k < parts.size(); ++k) {
      const double e = parts[k](u, v);
      d = mode == Combine::intersection ? std::max(d, e) : std::min(d, e);
    }
    return d;
  };
}

}  // namespace zmeq
