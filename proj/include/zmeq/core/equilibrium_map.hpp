#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "zmeq/core/price_vector.hpp"

namespace zmeq {

/// Structural properties a map's author declares. They are not verified at
/// construction; see checks.hpp for the sampling-based verifiers.
struct StructureFlags {
  bool z_function = false;
  bool diagonal_isotone = false;
  bool m_function = false;
  bool m0_function = false;
};

/// Excess-supply map Q : R^Z -> R^Z.
///
/// Implementations provide the per-coordinate residual Q_z(pi, p_{-z}); the
/// full evaluation is always assembled from it, so the two agree exactly.
/// Evaluators must be pure: maps are shared across threads.
class EquilibriumMap {
 public:
  virtual ~EquilibriumMap() = default;

  const CoordinatesPtr& coordinates() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_->size(); }
  const StructureFlags& flags() const noexcept { return flags_; }

  /// Q_z at the point p with p_z replaced by pi. The entry p[z] is ignored.
  virtual double residual(std::size_t z, double pi, std::span<const double> p) const = 0;

  /// Closed-form solution of Q_z(pi, p_{-z}) = 0 when the model has one.
  virtual std::optional<double> closed_form_update(std::size_t z, std::span<const double> p) const;

  /// Q(p); throws NonFiniteResidual naming the first bad coordinate.
  ExcessVector evaluate(const PriceVector& p) const;
  void evaluate(std::span<const double> p, std::span<double> out) const;

 protected:
  EquilibriumMap(CoordinatesPtr coords, StructureFlags flags);

 private:
  CoordinatesPtr coords_;
  StructureFlags flags_;
};

using ResidualFn = std::function<double(std::size_t z, double pi, std::span<const double> p)>;
using UpdateFn = std::function<std::optional<double>(std::size_t z, std::span<const double> p)>;

/// Map assembled from callables; convenient for one-off scalar models.
class FunctionMap final : public EquilibriumMap {
 public:
  FunctionMap(CoordinatesPtr coords, ResidualFn residual, StructureFlags flags = {},
              UpdateFn update = {});

  double residual(std::size_t z, double pi, std::span<const double> p) const override;
  std::optional<double> closed_form_update(std::size_t z, std::span<const double> p) const override;

 private:
  ResidualFn residual_;
  UpdateFn update_;
};

}  // namespace zmeq
