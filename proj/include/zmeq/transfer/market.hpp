#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zmeq/core/matrix.hpp"
#include "zmeq/core/price_vector.hpp"
#include "zmeq/transfer/frontier.hpp"

namespace zmeq {

/// Type-level matching market: n_x workers of type x, m_y firms of type y,
/// one frontier per pair, and a common heterogeneity scale sigma. Price
/// coordinates are X followed by Y, labeled by the type labels.
class AggregateMarket {
 public:
  AggregateMarket(std::vector<std::string> x_labels, std::vector<std::string> y_labels, std::vector<double> n,
                  std::vector<double> m, std::vector<Frontier> frontiers, double sigma, bool singles);

  std::size_t num_x() const noexcept { return n_.size(); }
  std::size_t num_y() const noexcept { return m_.size(); }
  const std::vector<std::string>& x_labels() const noexcept { return x_labels_; }
  const std::vector<std::string>& y_labels() const noexcept { return y_labels_; }
  const std::vector<double>& n() const noexcept { return n_; }
  const std::vector<double>& m() const noexcept { return m_; }
  const Frontier& frontier(std::size_t x, std::size_t y) const { return frontiers_[x * num_y() + y]; }
  double sigma() const noexcept { return sigma_; }
  bool singles() const noexcept { return singles_; }
  bool all_tu() const noexcept;
  bool all_ntu() const noexcept;

  /// X then Y.
  const CoordinatesPtr& coordinates() const noexcept { return coords_; }
  std::size_t y_index(const std::string& label) const;

 private:
  std::vector<std::string> x_labels_;
  std::vector<std::string> y_labels_;
  std::vector<double> n_;
  std::vector<double> m_;
  std::vector<Frontier> frontiers_;
  double sigma_;
  bool singles_;
  CoordinatesPtr coords_;
};

/// Labels x1..xN and y1..yM with TU frontiers phi(x, y).
AggregateMarket tu_market(const Matrix& phi, std::vector<double> n, std::vector<double> m, double sigma,
                          bool singles);

/// Labels x1..xN and y1..yM with one frontier per cell, row-major.
AggregateMarket numbered_market(std::size_t nx, std::size_t ny, std::vector<double> n, std::vector<double> m,
                                std::vector<Frontier> frontiers, double sigma, bool singles);

/// Matching flows and payoffs. mu_x0 and mu_0y are empty without singles.
struct AggregateEquilibrium {
  Matrix mu;
  std::vector<double> mu_x0;
  std::vector<double> mu_0y;
  std::vector<double> u;
  std::vector<double> v;
};

}  // namespace zmeq
