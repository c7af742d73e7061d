#include "zmeq/hedonic/hedonic.hpp"

#include <algorithm>
#include <cmath>

#include "zmeq/core/errors.hpp"
#include "zmeq/core/solver.hpp"

namespace zmeq {

namespace {

void require_masses(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw InvalidInput(std::string("hedonic market needs at least one ") + what + " type");
  for (double x : v) {
    if (!std::isfinite(x) || !(x > 0.0)) throw InvalidInput(std::string(what) + " masses must be positive and finite");
  }
}

void require_finite(const Matrix& a, const char* what) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite");
  }
}

// Logit share of option z among {outside, options} with utilities e:
// exp(e_z) / (1 + sum exp(e)), shifted by max(0, max e).
double logit_share(std::span<const double> e, std::size_t z) {
  double top = 0.0;
  for (double v : e) top = std::max(top, v);
  double denom = std::exp(-top);
  for (double v : e) denom += std::exp(v - top);
  return std::exp(e[z] - top) / denom;
}

template <class Utility>
double side_total(const std::vector<double>& mass, std::size_t nz, std::size_t z, Utility utility) {
  thread_local std::vector<double> e;
  e.resize(nz);
  double total = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) {
    for (std::size_t w = 0; w < nz; ++w) e[w] = utility(k, w);
    total += mass[k] * logit_share(e, z);
  }
  return total;
}

double supply_at(const HedonicMarket& mk, std::size_t z, double pi, std::span<const double> p) {
  return side_total(mk.n(), mk.num_z(), z,
                    [&](std::size_t x, std::size_t w) { return (w == z ? pi : p[w]) - mk.c()(x, w); });
}

double demand_at(const HedonicMarket& mk, std::size_t z, double pi, std::span<const double> p) {
  return side_total(mk.m(), mk.num_z(), z,
                    [&](std::size_t y, std::size_t w) { return mk.a()(y, w) - (w == z ? pi : p[w]); });
}

void require_size(const HedonicMarket& mk, std::span<const double> p) {
  if (p.size() != mk.num_z()) throw InvalidInput("price vector size does not match the locations");
}

PriceVector uniform_search(const HedonicMap& q, double sign) {
  double k = 1.0;
  for (int step = 0; step < 1100 && std::isfinite(k); ++step, k *= 2.0) {
    const auto p = PriceVector::constant(q.coordinates(), sign * k);
    if (sign > 0 ? is_supersolution(q, p) : is_subsolution(q, p)) return p;
  }
  throw InternalError("no uniform price bounds the hedonic equilibrium");
}

}  // namespace

HedonicMarket::HedonicMarket(std::vector<std::string> z_labels, std::vector<double> n, std::vector<double> m,
                             Matrix c, Matrix a)
    : n_(std::move(n)), m_(std::move(m)), c_(std::move(c)), a_(std::move(a)), coords_(make_coordinates(std::move(z_labels))) {
  require_masses(n_, "driver");
  require_masses(m_, "passenger");
  if (coords_->size() == 0) throw InvalidInput("hedonic market needs at least one location");
  if (c_.rows() != n_.size() || c_.cols() != num_z()) throw InvalidInput("cost matrix must be |X| x |Z|");
  if (a_.rows() != m_.size() || a_.cols() != num_z()) throw InvalidInput("amenity matrix must be |Y| x |Z|");
  require_finite(c_, "costs");
  require_finite(a_, "amenities");
}

std::vector<double> supply(const HedonicMarket& market, std::span<const double> p) {
  require_size(market, p);
  std::vector<double> s(market.num_z());
  for (std::size_t z = 0; z < s.size(); ++z) s[z] = supply_at(market, z, p[z], p);
  return s;
}

std::vector<double> demand(const HedonicMarket& market, std::span<const double> p) {
  require_size(market, p);
  std::vector<double> d(market.num_z());
  for (std::size_t z = 0; z < d.size(); ++z) d[z] = demand_at(market, z, p[z], p);
  return d;
}

namespace {

StructureFlags hedonic_flags() {
  StructureFlags f;
  f.z_function = true;
  f.diagonal_isotone = true;
  f.m_function = true;
  f.m0_function = true;
  return f;
}

}  // namespace

HedonicMap::HedonicMap(HedonicMarket market)
    : EquilibriumMap(market.coordinates(), hedonic_flags()), market_(std::move(market)) {}

double HedonicMap::residual(std::size_t z, double pi, std::span<const double> p) const {
  return supply_at(market_, z, pi, p) - demand_at(market_, z, pi, p);
}

HedonicMap build_hedonic_map(const HedonicMarket& market) { return HedonicMap(market); }

PriceVector hedonic_supersolution(const HedonicMap& q) { return uniform_search(q, 1.0); }

PriceVector hedonic_subsolution(const HedonicMap& q) { return uniform_search(q, -1.0); }

}  // namespace zmeq
