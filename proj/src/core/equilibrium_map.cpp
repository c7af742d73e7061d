#include "zmeq/core/equilibrium_map.hpp"

#include <cmath>

#include "zmeq/core/errors.hpp"

namespace zmeq {

EquilibriumMap::EquilibriumMap(CoordinatesPtr coords, StructureFlags flags)
    : coords_(std::move(coords)), flags_(flags) {
  if (!coords_) throw InvalidInput("equilibrium map without coordinates");
}

std::optional<double> EquilibriumMap::closed_form_update(std::size_t, std::span<const double>) const {
  return std::nullopt;
}

void EquilibriumMap::evaluate(std::span<const double> p, std::span<double> out) const {
  if (p.size() != size() || out.size() != size()) {
    throw InvalidInput("evaluate: vector size does not match the map");
  }
  for (std::size_t z = 0; z < size(); ++z) {
    const double r = residual(z, p[z], p);
    if (!std::isfinite(r)) throw NonFiniteResidual(coords_->label(z), r);
    out[z] = r;
  }
}

ExcessVector EquilibriumMap::evaluate(const PriceVector& p) const {
  if (!same_coordinates(p.coordinates(), *coords_)) {
    throw InvalidInput("price vector does not live on the map's coordinate set");
  }
  std::vector<double> out(size());
  evaluate(p.values(), out);
  return ExcessVector(coords_, std::move(out));
}

FunctionMap::FunctionMap(CoordinatesPtr coords, ResidualFn residual, StructureFlags flags, UpdateFn update)
    : EquilibriumMap(std::move(coords), flags), residual_(std::move(residual)), update_(std::move(update)) {
  if (!residual_) throw InvalidInput("FunctionMap needs a residual evaluator");
}

double FunctionMap::residual(std::size_t z, double pi, std::span<const double> p) const {
  return residual_(z, pi, p);
}

std::optional<double> FunctionMap::closed_form_update(std::size_t z, std::span<const double> p) const {
  if (!update_) return std::nullopt;
  return update_(z, p);
}

}  // namespace zmeq
