#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "zmeq/matching/aggregate.hpp"
#include "zmeq/matching/individual.hpp"
#include "zmeq/transfer/market.hpp"

namespace zmeq::testing {

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t k, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(k);
  for (auto& x : v) x = u(rng);
  return v;
}

inline Matrix uniform_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = u(rng);
  }
  return a;
}

/// TU market with phi ~ U[-1, 1] and masses ~ U[0.5, 2].
inline AggregateMarket random_tu_market(std::mt19937_64& rng, std::size_t nx, std::size_t ny, double sigma = 1.0) {
  return tu_market(uniform_matrix(rng, nx, ny, -1.0, 1.0), uniform_vector(rng, nx, 0.5, 2.0),
                   uniform_vector(rng, ny, 0.5, 2.0), sigma, true);
}

/// Two-bracket taxes {(0, 0), (rate, threshold)} with alpha, gamma ~ U[-1, 1].
inline AggregateMarket random_tax_market(std::mt19937_64& rng, std::size_t nx, std::size_t ny, double rate,
                                         double threshold, double sigma = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const TaxSchedule schedule({{0.0, 0.0}, {rate, threshold}});
  std::vector<Frontier> f;
  for (std::size_t k = 0; k < nx * ny; ++k) f.emplace_back(TaxFrontier{u(rng), u(rng), schedule});
  return numbered_market(nx, ny, uniform_vector(rng, nx, 0.5, 2.0), uniform_vector(rng, ny, 0.5, 2.0), std::move(f),
                         sigma, true);
}

/// NTU housing market with alpha, gamma ~ U[-1, 1], sigma = 1.
inline AggregateMarket random_housing_market(std::mt19937_64& rng, std::size_t nx, std::size_t ny,
                                             bool singles = true) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Frontier> f;
  for (std::size_t k = 0; k < nx * ny; ++k) f.emplace_back(NtuFrontier{u(rng), u(rng)});
  auto n = uniform_vector(rng, nx, 0.5, 2.0);
  auto m = uniform_vector(rng, ny, 0.5, 2.0);
  if (!singles) {
    double sn = 0.0;
    double sm = 0.0;
    for (double v : n) sn += v;
    for (double v : m) sm += v;
    for (auto& v : m) v *= sn / sm;
  }
  return numbered_market(nx, ny, std::move(n), std::move(m), std::move(f), 1.0, singles);
}

/// Balanced TU market without singles.
inline AggregateMarket random_balanced_tu_market(std::mt19937_64& rng, std::size_t nx, std::size_t ny,
                                                 double sigma = 1.0) {
  auto n = uniform_vector(rng, nx, 0.5, 2.0);
  auto m = uniform_vector(rng, ny, 0.5, 2.0);
  double sn = 0.0;
  double sm = 0.0;
  for (double v : n) sn += v;
  for (double v : m) sm += v;
  for (auto& v : m) v *= sn / sm;
  return tu_market(uniform_matrix(rng, nx, ny, -1.0, 1.0), std::move(n), std::move(m), sigma, false);
}

/// No-indifference market with small integer utilities: each row of alpha and
/// each column of gamma is a random draw without replacement from
/// {-3, -2, -1, 1, 2, ..., 2k}, k the row or column length.
inline IndividualMarket random_individual_market(std::mt19937_64& rng, std::size_t ni, std::size_t nj) {
  auto draw = [&rng](std::size_t k) {
    std::vector<double> pool{-3.0, -2.0, -1.0};
    for (std::size_t v = 1; v <= 2 * k; ++v) pool.push_back(static_cast<double>(v));
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(k);
    return pool;
  };
  Matrix alpha(ni, nj), gamma(ni, nj);
  for (std::size_t i = 0; i < ni; ++i) {
    const auto row = draw(nj);
    for (std::size_t j = 0; j < nj; ++j) alpha(i, j) = row[j];
  }
  for (std::size_t j = 0; j < nj; ++j) {
    const auto col = draw(ni);
    for (std::size_t i = 0; i < ni; ++i) gamma(i, j) = col[i];
  }
  return IndividualMarket(std::move(alpha), std::move(gamma));
}

/// Aggregate market with masses ~ U[0.5, 3] and alpha, gamma ~ U[-1, 2].
inline AggregateNTMarket random_aggregate_market(std::mt19937_64& rng, std::size_t nx, std::size_t ny) {
  return AggregateNTMarket(uniform_vector(rng, nx, 0.5, 3.0), uniform_vector(rng, ny, 0.5, 3.0),
                           uniform_matrix(rng, nx, ny, -1.0, 2.0), uniform_matrix(rng, nx, ny, -1.0, 2.0));
}

}  // namespace zmeq::testing
