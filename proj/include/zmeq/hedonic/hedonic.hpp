#pragma once

#include <span>
#include <string>
#include <vector>

#include "zmeq/core/equilibrium_map.hpp"
#include "zmeq/core/matrix.hpp"
#include "zmeq/core/price_vector.hpp"

namespace zmeq {

/// Ride-hailing market: drivers of type x pay c_xz to pick up at z,
/// passengers of type y enjoy a_yz when picked up at z. Prices live on Z.
class HedonicMarket {
 public:
  HedonicMarket(std::vector<std::string> z_labels, std::vector<double> n, std::vector<double> m, Matrix c, Matrix a);

  const std::vector<double>& n() const noexcept { return n_; }
  const std::vector<double>& m() const noexcept { return m_; }
  const Matrix& c() const noexcept { return c_; }
  const Matrix& a() const noexcept { return a_; }
  std::size_t num_z() const noexcept { return coords_->size(); }
  const CoordinatesPtr& coordinates() const noexcept { return coords_; }

 private:
  std::vector<double> n_;
  std::vector<double> m_;
  Matrix c_;
  Matrix a_;
  CoordinatesPtr coords_;
};

/// S_z(p) = sum_x n_x exp(p_z - c_xz) / (1 + sum_z' exp(p_z' - c_xz')).
std::vector<double> supply(const HedonicMarket& market, std::span<const double> p);

/// D_z(p) = sum_y m_y exp(a_yz - p_z) / (1 + sum_z' exp(a_yz' - p_z')).
std::vector<double> demand(const HedonicMarket& market, std::span<const double> p);

/// Q_z = S_z - D_z, solved coordinate-wise by bisection.
class HedonicMap final : public EquilibriumMap {
 public:
  explicit HedonicMap(HedonicMarket market);

  const HedonicMarket& market() const noexcept { return market_; }
  double residual(std::size_t z, double pi, std::span<const double> p) const override;

 private:
  HedonicMarket market_;
};

HedonicMap build_hedonic_map(const HedonicMarket& market);

/// Uniform price k = 1, 2, 4, ... until the constant vector is a
/// supersolution (or -k a subsolution).
PriceVector hedonic_supersolution(const HedonicMap& q);
PriceVector hedonic_subsolution(const HedonicMap& q);

}  // namespace zmeq
