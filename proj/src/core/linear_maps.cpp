#include "zmeq/core/linear_maps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zmeq/core/errors.hpp"

namespace zmeq {

namespace {

StructureFlags flags_of(const Matrix& a) {
  StructureFlags f;
  f.z_function = true;
  f.diagonal_isotone = true;
  bool strict = true;
  bool weak = true;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      col += a(i, j);
      if (i != j && a(i, j) > 0.0) f.z_function = false;
      if (i == j && a(i, j) < 0.0) f.diagonal_isotone = false;
    }
    if (!(col > 0.0)) strict = false;
    if (!(col >= 0.0)) weak = false;
  }
  f.m_function = f.z_function && strict;
  f.m0_function = f.z_function && weak;
  return f;
}

void require_square(const Matrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) throw InvalidInput("linear map needs a nonempty square matrix");
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw InvalidInput("linear map matrix has non-finite entries");
  }
}

}  // namespace

LinearMap::LinearMap(CoordinatesPtr coords, Matrix a, StructureFlags flags)
    : EquilibriumMap(std::move(coords), flags), a_(std::move(a)) {
  require_square(a_);
  if (a_.rows() != size()) throw InvalidInput("matrix size does not match the coordinate set");
}

double LinearMap::residual(std::size_t z, double pi, std::span<const double> p) const {
  double s = 0.0;
  for (std::size_t w = 0; w < a_.cols(); ++w) s += a_(z, w) * (w == z ? pi : p[w]);
  return s;
}

std::optional<double> LinearMap::closed_form_update(std::size_t z, std::span<const double> p) const {
  const double d = a_(z, z);
  if (!(d > 0.0)) return std::nullopt;
  double s = 0.0;
  for (std::size_t w = 0; w < a_.cols(); ++w) {
    if (w != z) s += a_(z, w) * p[w];
  }
  return -s / d;
}

CoordinatesPtr numbered_coordinates(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  return make_coordinates(std::move(labels));
}

LinearMap linear_map(const Matrix& a) {
  require_square(a);
  return linear_map(a, numbered_coordinates(a.rows()));
}

LinearMap linear_map(const Matrix& a, CoordinatesPtr coords) {
  require_square(a);
  return LinearMap(std::move(coords), a, flags_of(a));
}

namespace {

void validate_constant_aggregate(const std::vector<double>& delta, const Matrix& a) {
  require_square(a);
  const std::size_t n = a.rows();
  if (delta.size() != n) throw InvalidInput("Delta and A sizes differ");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(delta[i] > 0.0) || !std::isfinite(delta[i])) throw InvalidInput("Delta must be positive");
    if (a(i, i) != 0.0) throw InvalidInput("A must have a zero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (a(i, j) < 0.0) throw InvalidInput("A must be nonnegative");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    double col = delta[j];
    double scale = delta[j];
    for (std::size_t i = 0; i < n; ++i) {
      col -= a(i, j);
      scale += a(i, j);
    }
    if (std::abs(col) > 1e-12 * scale) {
      throw InvalidInput("column " + std::to_string(j + 1) + " of Delta - A does not sum to zero");
    }
  }
}

// Every node reaches every other along edges i -> j with A_ij > 0.
bool strongly_connected(const Matrix& a) {
  const std::size_t n = a.rows();
  auto reaches_all = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        const double w = transpose ? a(j, i) : a(i, j);
        if (w > 0.0 && !seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reaches_all(false) && reaches_all(true);
}

}  // namespace

LinearMap constant_aggregate_map(const std::vector<double>& delta, const Matrix& a) {
  validate_constant_aggregate(delta, a);
  Matrix q(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) q(i, j) = (i == j ? delta[i] : 0.0) - a(i, j);
  }
  StructureFlags f;
  f.z_function = true;
  f.diagonal_isotone = true;
  f.m0_function = true;
  return LinearMap(numbered_coordinates(a.rows()), std::move(q), f);
}

std::vector<double> perron_vector(const std::vector<double>& delta, const Matrix& a) {
  validate_constant_aggregate(delta, a);
  if (!strongly_connected(a)) {
    throw IrreducibilityViolation("Delta^{-1} A is reducible: its graph is not strongly connected");
  }
  const std::size_t n = a.rows();
  // Power iteration on the lazy matrix (I + Delta^{-1} A) / 2: same Perron
  // vector, but aperiodic, so it converges even for cyclic A.
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int it = 0; it < 1000000; ++it) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
      next[i] = 0.5 * (v[i] + s / delta[i]);
      total += next[i];
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      change = std::max(change, std::abs(next[i] - v[i]));
    }
    v.swap(next);
    if (change <= 1e-16) break;
  }
  return v;
}

}  // namespace zmeq
