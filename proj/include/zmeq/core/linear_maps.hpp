#pragma once

#include <vector>

#include "zmeq/core/equilibrium_map.hpp"
#include "zmeq/core/matrix.hpp"

namespace zmeq {

/// Q(p) = A p.
///
/// Flags are read off A: Z-function iff every off-diagonal entry is <= 0,
/// diagonal isotone iff the diagonal is >= 0, M-function iff additionally
/// 1^T A > 0 (strict column dominance), M0-function iff 1^T A >= 0.
class LinearMap final : public EquilibriumMap {
 public:
  LinearMap(CoordinatesPtr coords, Matrix a, StructureFlags flags);

  const Matrix& matrix() const noexcept { return a_; }

  double residual(std::size_t z, double pi, std::span<const double> p) const override;
  /// pi = -(sum_{w != z} A_zw p_w) / A_zz, available when A_zz > 0.
  std::optional<double> closed_form_update(std::size_t z, std::span<const double> p) const override;

 private:
  Matrix a_;
};

/// Default labels "1".."n".
CoordinatesPtr numbered_coordinates(std::size_t n);

LinearMap linear_map(const Matrix& a);
LinearMap linear_map(const Matrix& a, CoordinatesPtr coords);

/// Q(p) = (Delta - A) p for a positive diagonal Delta and a nonnegative A with
/// zero diagonal, subject to 1^T (Delta - A) = 0 (constant aggregates).
LinearMap constant_aggregate_map(const std::vector<double>& delta, const Matrix& a);

/// Perron vector v >= 0 of Delta^{-1} A, normalized to sum 1, so that
/// (Delta - A) v = 0. Throws IrreducibilityViolation when the graph of A is
/// not strongly connected.
std::vector<double> perron_vector(const std::vector<double>& delta, const Matrix& a);

}  // namespace zmeq
