#include "zmeq/core/price_vector.hpp"

#include <algorithm>
#include <cmath>

#include "zmeq/core/errors.hpp"

namespace zmeq {

NonFiniteResidual::NonFiniteResidual(std::string label, double value)
    : Error("non-finite residual at coordinate '" + label + "' (" + std::to_string(value) + ")"),
      label_(std::move(label)),
      value_(value) {}

ResponsivenessViolation::ResponsivenessViolation(std::string label, const std::string& detail)
    : Error(label.empty() ? "responsiveness violated: " + detail
                          : "responsiveness violated at coordinate '" + label + "': " + detail),
      label_(std::move(label)) {}

Coordinates::Coordinates(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw InvalidInput("duplicate coordinate label '" + labels_[i] + "'");
    }
  }
}

std::optional<std::size_t> Coordinates::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CoordinatesPtr make_coordinates(std::vector<std::string> labels) {
  return std::make_shared<const Coordinates>(std::move(labels));
}

bool same_coordinates(const Coordinates& a, const Coordinates& b) {
  return &a == &b || a.labels() == b.labels();
}

PriceVector::PriceVector(CoordinatesPtr coords, std::vector<double> values)
    : coords_(std::move(coords)), values_(std::move(values)) {
  if (!coords_) throw InvalidInput("price vector without coordinates");
  if (values_.size() != coords_->size()) {
    throw InvalidInput("price vector has " + std::to_string(values_.size()) + " values for " +
                       std::to_string(coords_->size()) + " coordinates");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInput("price for '" + coords_->label(i) + "' is not finite");
    }
  }
}

PriceVector PriceVector::constant(CoordinatesPtr coords, double value) {
  const std::size_t n = coords ? coords->size() : 0;
  return PriceVector(std::move(coords), std::vector<double>(n, value));
}

double PriceVector::at(std::string_view label) const {
  auto i = coords_->index_of(label);
  if (!i) throw InvalidInput("unknown coordinate '" + std::string(label) + "'");
  return values_[*i];
}

PriceVector PriceVector::with(std::size_t z, double value) const {
  std::vector<double> v = values_;
  v.at(z) = value;
  return PriceVector(coords_, std::move(v));
}

ExcessVector::ExcessVector(CoordinatesPtr coords, std::vector<double> values)
    : coords_(std::move(coords)), values_(std::move(values)) {
  if (!coords_ || values_.size() != coords_->size()) {
    throw InvalidInput("excess vector does not match its coordinate set");
  }
}

double ExcessVector::sup_norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

namespace {

// Index of each label of a inside b.
std::vector<std::size_t> align(const Coordinates& a, const Coordinates& b) {
  if (a.size() != b.size()) throw InvalidInput("price vectors live on different coordinate sets");
  std::vector<std::size_t> map(a.size());
  if (same_coordinates(a, b)) {
    for (std::size_t i = 0; i < a.size(); ++i) map[i] = i;
    return map;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto j = b.index_of(a.label(i));
    if (!j) throw InvalidInput("label '" + a.label(i) + "' missing from the other vector");
    map[i] = *j;
  }
  return map;
}

template <class Op>
PriceVector combine(const PriceVector& a, const PriceVector& b, Op op) {
  const auto idx = align(a.coordinates(), b.coordinates());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[idx[i]]);
  return PriceVector(a.coordinates_ptr(), std::move(out));
}

}  // namespace

PriceVector meet(const PriceVector& a, const PriceVector& b) {
  return combine(a, b, [](double x, double y) { return std::min(x, y); });
}

PriceVector join(const PriceVector& a, const PriceVector& b) {
  return combine(a, b, [](double x, double y) { return std::max(x, y); });
}

bool less_equal(const PriceVector& a, const PriceVector& b) {
  const auto idx = align(a.coordinates(), b.coordinates());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] <= b[idx[i]])) return false;
  }
  return true;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("sup_distance: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace zmeq
