#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace zmeq {

/// Ordered, immutable set of unique coordinate labels. Shared between all
/// vectors that live on the same coordinate set.
class Coordinates {
 public:
  explicit Coordinates(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using CoordinatesPtr = std::shared_ptr<const Coordinates>;

CoordinatesPtr make_coordinates(std::vector<std::string> labels);

/// Same labels in the same order.
bool same_coordinates(const Coordinates& a, const Coordinates& b);

/// Labeled vector of finite prices.
class PriceVector {
 public:
  PriceVector(CoordinatesPtr coords, std::vector<double> values);

  static PriceVector constant(CoordinatesPtr coords, double value);

  const Coordinates& coordinates() const noexcept { return *coords_; }
  const CoordinatesPtr& coordinates_ptr() const noexcept { return coords_; }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::string_view label) const;
  std::span<const double> values() const noexcept { return values_; }

  /// Copy with coordinate z replaced.
  PriceVector with(std::size_t z, double value) const;

 private:
  CoordinatesPtr coords_;
  std::vector<double> values_;
};

/// Labeled excess-supply values Q(p). Non-finite entries are rejected by the
/// evaluator before one of these is built.
class ExcessVector {
 public:
  ExcessVector(CoordinatesPtr coords, std::vector<double> values);

  const Coordinates& coordinates() const noexcept { return *coords_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  double sup_norm() const noexcept;

 private:
  CoordinatesPtr coords_;
  std::vector<double> values_;
};

// Lattice operations and the partial order are matched label-wise, so the
// two operands may list their labels in different orders. The result uses
// the label order of the first operand.

/// Componentwise minimum.
PriceVector meet(const PriceVector& a, const PriceVector& b);
/// Componentwise maximum.
PriceVector join(const PriceVector& a, const PriceVector& b);
/// a <= b componentwise.
bool less_equal(const PriceVector& a, const PriceVector& b);

double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace zmeq
