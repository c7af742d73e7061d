#include "zmeq/transfer/maps.hpp"

#include <cmath>
#include <limits>

#include "zmeq/core/errors.hpp"
#include "zmeq/core/numerics.hpp"

namespace zmeq {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

CoordinatesPtr coordinates_without(const AggregateMarket& market, std::optional<std::size_t> pinned) {
  if (!pinned) return market.coordinates();
  std::vector<std::string> labels = market.x_labels();
  for (std::size_t y = 0; y < market.num_y(); ++y) {
    if (y != *pinned) labels.push_back(market.y_labels()[y]);
  }
  return make_coordinates(std::move(labels));
}

StructureFlags substitutes_flags(bool strict) {
  StructureFlags f;
  f.z_function = true;
  f.diagonal_isotone = true;
  f.m_function = strict;
  f.m0_function = true;
  return f;
}

std::vector<double>& scratch() {
  thread_local std::vector<double> buf;
  buf.clear();
  return buf;
}

void require_singles(const AggregateMarket& market, bool singles, const char* what) {
  if (market.singles() != singles) {
    throw InvalidInput(std::string(what) + (singles ? " needs a market with singles" : " needs a market without singles"));
  }
}

}  // namespace

TwoSidedMap::TwoSidedMap(AggregateMarket market, std::optional<std::size_t> pinned, double pinned_price,
                         StructureFlags f)
    : EquilibriumMap(coordinates_without(market, pinned), f),
      market_(std::move(market)),
      pinned_(pinned),
      pinned_price_(pinned_price),
      coord_of_y_(market_.num_y(), kNone) {
  if (pinned_ && *pinned_ >= market_.num_y()) throw InvalidInput("pinned firm type out of range");
  if (!std::isfinite(pinned_price_)) throw InvalidInput("pinned price must be finite");
  std::size_t next = market_.num_x();
  for (std::size_t y = 0; y < market_.num_y(); ++y) {
    if (pinned_ && y == *pinned_) continue;
    coord_of_y_[y] = next++;
    y_of_coord_.push_back(y);
  }
}

double TwoSidedMap::log_single_x(double) const { return -std::numeric_limits<double>::infinity(); }

double TwoSidedMap::log_single_y(double) const { return -std::numeric_limits<double>::infinity(); }

double TwoSidedMap::worker_payoff(std::size_t x, double px) const {
  return -px + market_.sigma() * std::log(market_.n()[x]);
}

double TwoSidedMap::firm_payoff(std::size_t y, double py) const {
  return py + market_.sigma() * std::log(market_.m()[y]);
}

double TwoSidedMap::y_price(std::size_t y, std::span<const double> p) const {
  return coord_of_y_[y] == kNone ? pinned_price_ : p[coord_of_y_[y]];
}

PriceVector TwoSidedMap::expand(const PriceVector& p) const {
  if (!same_coordinates(p.coordinates(), *coordinates())) throw InvalidInput("price vector has the wrong coordinates");
  std::vector<double> full(p.values().begin(), p.values().begin() + num_x());
  for (std::size_t y = 0; y < market_.num_y(); ++y) full.push_back(y_price(y, p.values()));
  return PriceVector(market_.coordinates(), std::move(full));
}

double TwoSidedMap::residual(std::size_t z, double pi, std::span<const double> p) const {
  auto& e = scratch();
  if (z < num_x()) {
    for (std::size_t y = 0; y < market_.num_y(); ++y) e.push_back(log_flow(z, y, pi, y_price(y, p)));
    if (market_.singles()) e.push_back(log_single_x(pi));
    return std::exp(log_sum_exp(e)) - market_.n()[z];
  }
  const std::size_t y = y_of(z);
  for (std::size_t x = 0; x < num_x(); ++x) e.push_back(log_flow(x, y, p[x], pi));
  if (market_.singles()) e.push_back(log_single_y(pi));
  return market_.m()[y] - std::exp(log_sum_exp(e));
}

double log_quadratic_root(double log_s, double n) {
  // a = 2n / (S + sqrt(S^2 + 4n)), written to avoid cancellation and overflow.
  if (log_s <= 0.0) {
    const double s = std::exp(log_s);
    return std::log(2.0 * n / (s + std::sqrt(s * s + 4.0 * n)));
  }
  return std::log(2.0 * n) - log_s - std::log(1.0 + std::sqrt(1.0 + 4.0 * n * std::exp(-2.0 * log_s)));
}

TransferMap::TransferMap(AggregateMarket market) : TwoSidedMap(std::move(market), std::nullopt, 0.0, substitutes_flags(true)) {
  require_singles(this->market(), true, "transfer map");
}

double TransferMap::log_flow(std::size_t x, std::size_t y, double px, double py) const {
  return -distance(market().frontier(x, y), -px, py) / market().sigma();
}

double TransferMap::log_single_x(double px) const { return px / market().sigma(); }

double TransferMap::log_single_y(double py) const { return -py / market().sigma(); }

std::optional<double> TransferMap::closed_form_update(std::size_t z, std::span<const double> p) const {
  const auto& mk = market();
  if (!mk.all_tu()) return std::nullopt;
  const double two_sigma = 2.0 * mk.sigma();
  auto& e = scratch();
  if (z < num_x()) {
    // a = exp(p_x / 2sigma) solves a^2 + S a - n_x = 0.
    for (std::size_t y = 0; y < mk.num_y(); ++y) {
      e.push_back((std::get<TuFrontier>(mk.frontier(z, y)).phi - p[y_coordinate(y)]) / two_sigma);
    }
    return two_sigma * log_quadratic_root(log_sum_exp(e), mk.n()[z]);
  }
  // b = exp(-p_y / 2sigma) solves b^2 + R b - m_y = 0.
  const std::size_t y = y_of(z);
  for (std::size_t x = 0; x < num_x(); ++x) e.push_back((std::get<TuFrontier>(mk.frontier(x, y)).phi + p[x]) / two_sigma);
  return -two_sigma * log_quadratic_root(log_sum_exp(e), mk.m()[y]);
}

FullAssignmentMap::FullAssignmentMap(AggregateMarket market, std::size_t y0, double pi)
    : TwoSidedMap(std::move(market), y0, pi, substitutes_flags(false)) {
  require_singles(this->market(), false, "full-assignment map");
}

double FullAssignmentMap::log_flow(std::size_t x, std::size_t y, double px, double py) const {
  return -distance(market().frontier(x, y), -px, py) / market().sigma();
}

std::optional<double> FullAssignmentMap::closed_form_update(std::size_t z, std::span<const double> p) const {
  const auto& mk = market();
  if (!mk.all_tu()) return std::nullopt;
  const double two_sigma = 2.0 * mk.sigma();
  auto& e = scratch();
  if (z < num_x()) {
    for (std::size_t y = 0; y < mk.num_y(); ++y) {
      e.push_back((std::get<TuFrontier>(mk.frontier(z, y)).phi - y_price(y, p)) / two_sigma);
    }
    return two_sigma * (std::log(mk.n()[z]) - log_sum_exp(e));
  }
  const std::size_t y = y_of(z);
  for (std::size_t x = 0; x < num_x(); ++x) e.push_back((std::get<TuFrontier>(mk.frontier(x, y)).phi + p[x]) / two_sigma);
  return two_sigma * (log_sum_exp(e) - std::log(mk.m()[y]));
}

OtMap::OtMap(AggregateMarket market) : TwoSidedMap(std::move(market), std::nullopt, 0.0, substitutes_flags(false)) {
  require_singles(this->market(), false, "optimal transport map");
  if (!this->market().all_tu()) throw UnsupportedFrontier("optimal transport map needs TU frontiers");
}

double OtMap::log_flow(std::size_t x, std::size_t y, double px, double py) const {
  return (std::get<TuFrontier>(market().frontier(x, y)).phi + (px - py)) / market().sigma();
}

double OtMap::worker_payoff(std::size_t, double px) const { return -px; }

double OtMap::firm_payoff(std::size_t, double py) const { return py; }

std::optional<double> OtMap::closed_form_update(std::size_t z, std::span<const double> p) const {
  const auto& mk = market();
  const double sigma = mk.sigma();
  auto& e = scratch();
  if (z < num_x()) {
    for (std::size_t y = 0; y < mk.num_y(); ++y) {
      e.push_back((std::get<TuFrontier>(mk.frontier(z, y)).phi - p[y_coordinate(y)]) / sigma);
    }
    return sigma * (std::log(mk.n()[z]) - log_sum_exp(e));
  }
  const std::size_t y = y_of(z);
  for (std::size_t x = 0; x < num_x(); ++x) e.push_back((std::get<TuFrontier>(mk.frontier(x, y)).phi + p[x]) / sigma);
  return sigma * (log_sum_exp(e) - std::log(mk.m()[y]));
}

namespace {

void require_housing(const AggregateMarket& market) {
  if (!market.all_ntu()) throw UnsupportedFrontier("housing map needs NTU frontiers");
  if (market.sigma() != 1.0) throw InvalidInput("housing map uses sigma = 1");
}

double housing_log_flow(const AggregateMarket& market, std::size_t x, std::size_t y, double px, double py) {
  const auto& f = std::get<NtuFrontier>(market.frontier(x, y));
  return std::min(px + f.alpha, f.gamma - py);
}

}  // namespace

HousingMap::HousingMap(AggregateMarket market) : TwoSidedMap(std::move(market), std::nullopt, 0.0, substitutes_flags(true)) {
  require_singles(this->market(), true, "housing map");
  require_housing(this->market());
}

double HousingMap::log_flow(std::size_t x, std::size_t y, double px, double py) const {
  return housing_log_flow(market(), x, y, px, py);
}

double HousingMap::log_single_x(double px) const { return px; }

double HousingMap::log_single_y(double py) const { return -py; }

HousingFullAssignmentMap::HousingFullAssignmentMap(AggregateMarket market, std::size_t y0, double pi)
    : TwoSidedMap(std::move(market), y0, pi, substitutes_flags(false)) {
  require_singles(this->market(), false, "housing full-assignment map");
  require_housing(this->market());
}

double HousingFullAssignmentMap::log_flow(std::size_t x, std::size_t y, double px, double py) const {
  return housing_log_flow(market(), x, y, px, py);
}

TransferMap build_transfer_map(const AggregateMarket& market) { return TransferMap(market); }

FullAssignmentMap build_full_assignment_map(const AggregateMarket& market, const std::string& y0, double pi) {
  return FullAssignmentMap(market, market.y_index(y0), pi);
}

OtMap build_ot_map(const AggregateMarket& market) { return OtMap(market); }

HousingMap build_housing_map(const AggregateMarket& market) { return HousingMap(market); }

HousingFullAssignmentMap build_housing_full_assignment_map(const AggregateMarket& market, const std::string& y0,
                                                           double pi) {
  return HousingFullAssignmentMap(market, market.y_index(y0), pi);
}

double sinkhorn_update(const TransferMap& q, std::size_t z, const PriceVector& p) {
  const auto r = q.closed_form_update(z, p.values());
  if (!r) throw UnsupportedFrontier("Sinkhorn update needs TU frontiers");
  return *r;
}

}  // namespace zmeq
