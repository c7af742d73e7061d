#include "zmeq/transfer/market.hpp"

#include <algorithm>
#include <cmath>

#include "zmeq/core/errors.hpp"

namespace zmeq {

namespace {

void require_masses(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw InvalidInput(std::string("market needs at least one ") + what + " type");
  for (double x : v) {
    if (!std::isfinite(x) || !(x > 0.0)) throw InvalidInput(std::string(what) + " masses must be positive and finite");
  }
}

std::vector<std::string> numbered(const char* prefix, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

AggregateMarket::AggregateMarket(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                                 std::vector<double> n, std::vector<double> m, std::vector<Frontier> frontiers,
                                 double sigma, bool singles)
    : x_labels_(std::move(x_labels)),
      y_labels_(std::move(y_labels)),
      n_(std::move(n)),
      m_(std::move(m)),
      frontiers_(std::move(frontiers)),
      sigma_(sigma),
      singles_(singles) {
  require_masses(n_, "worker");
  require_masses(m_, "firm");
  if (x_labels_.size() != n_.size() || y_labels_.size() != m_.size()) {
    throw InvalidInput("label count does not match mass count");
  }
  if (frontiers_.size() != n_.size() * m_.size()) throw InvalidInput("need one frontier per (x, y) pair");
  for (const auto& f : frontiers_) validate_frontier(f);
  if (!std::isfinite(sigma_) || !(sigma_ > 0.0)) throw InvalidInput("sigma must be positive and finite");
  if (!singles_) {
    double sn = 0.0;
    double sm = 0.0;
    for (double x : n_) sn += x;
    for (double x : m_) sm += x;
    if (std::abs(sn - sm) > 1e-9 * std::max(sn, sm)) {
      throw InvalidInput("without singles the total masses of both sides must be equal");
    }
  }
  std::vector<std::string> all = x_labels_;
  all.insert(all.end(), y_labels_.begin(), y_labels_.end());
  coords_ = make_coordinates(std::move(all));
}

bool AggregateMarket::all_tu() const noexcept {
  return std::all_of(frontiers_.begin(), frontiers_.end(), [](const Frontier& f) { return is_tu(f); });
}

bool AggregateMarket::all_ntu() const noexcept {
  return std::all_of(frontiers_.begin(), frontiers_.end(),
                     [](const Frontier& f) { return std::holds_alternative<NtuFrontier>(f); });
}

std::size_t AggregateMarket::y_index(const std::string& label) const {
  for (std::size_t y = 0; y < y_labels_.size(); ++y) {
    if (y_labels_[y] == label) return y;
  }
  throw InvalidInput("unknown firm type '" + label + "'");
}

AggregateMarket tu_market(const Matrix& phi, std::vector<double> n, std::vector<double> m, double sigma,
                          bool singles) {
  if (phi.rows() != n.size() || phi.cols() != m.size()) throw InvalidInput("phi shape does not match the masses");
  std::vector<Frontier> f;
  for (double v : phi.data()) f.emplace_back(TuFrontier{v});
  const std::size_t nx = n.size();
  const std::size_t ny = m.size();
  return numbered_market(nx, ny, std::move(n), std::move(m), std::move(f), sigma, singles);
}

AggregateMarket numbered_market(std::size_t nx, std::size_t ny, std::vector<double> n, std::vector<double> m,
                                std::vector<Frontier> frontiers, double sigma, bool singles) {
  return AggregateMarket(numbered("x", nx), numbered("y", ny), std::move(n), std::move(m), std::move(frontiers),
                         sigma, singles);
}

}  // namespace zmeq
