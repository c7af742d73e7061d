#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "zmeq/core/equilibrium_map.hpp"
#include "zmeq/core/errors.hpp"
#include "zmeq/core/price_vector.hpp"
#include "zmeq/core/root_finding.hpp"

namespace zmeq {

enum class SweepMode { jacobi, gauss_seidel };

struct SolverOptions {
  double residual_tol = 1e-10;
  double step_tol = 0.0;  // 0 disables the step criterion
  int max_sweeps = 10000;
  SweepMode mode = SweepMode::jacobi;
  std::vector<std::size_t> sweep_order;  // Gauss-Seidel only; empty = natural order
  double damping = 1.0;
  BracketOptions root_finder;

  void validate(std::size_t dimension) const;
};

struct SweepRecord {
  int sweep = 0;
  std::vector<double> values;
  double residual_sup = 0.0;
  bool nondecreasing = true;  // vs. the previous iterate
  bool nonincreasing = true;
  bool is_subsolution = false;
  bool is_supersolution = false;
};

/// Iterates of one solve. `initial` describes the starting point (sweep 0);
/// `sweeps` holds one record per completed sweep, in order.
struct SolveTrace {
  CoordinatesPtr coordinates;
  SweepRecord initial;
  std::vector<SweepRecord> sweeps;
};

struct SolveResult {
  PriceVector solution;
  SolveTrace trace;
  double residual_sup = 0.0;

  int sweeps() const noexcept { return static_cast<int>(trace.sweeps.size()); }
};

/// Raised when the iteration fails to reach the tolerance within max_sweeps,
/// or when the iterates leave the finite range (geometric divergence).
class MaxSweepsExceeded : public Error {
 public:
  MaxSweepsExceeded(SolveTrace trace, bool diverged, const std::string& detail);

  const SolveTrace& trace() const noexcept { return trace_; }
  bool diverged() const noexcept { return diverged_; }

 private:
  SolveTrace trace_;
  bool diverged_;
};

/// Q_z(p) <= tol for all z.
bool is_subsolution(const EquilibriumMap& q, const PriceVector& p, double tol = 0.0);
/// Q_z(p) >= -tol for all z.
bool is_supersolution(const EquilibriumMap& q, const PriceVector& p, double tol = 0.0);

double residual_sup(const EquilibriumMap& q, const PriceVector& p);

/// Smallest root of pi -> Q_z(pi, p_{-z}); the closed form when the map has one.
double coordinate_update(const EquilibriumMap& q, std::size_t z, const PriceVector& p,
                         const SolverOptions& opts = {});

/// All coordinates updated from the same p, then damped: p + delta (T(p) - p).
PriceVector jacobi_sweep(const EquilibriumMap& q, const PriceVector& p, const SolverOptions& opts = {});

/// Coordinates updated one at a time in sweep_order, each seeing the values
/// already updated in this sweep.
PriceVector gauss_seidel_sweep(const EquilibriumMap& q, const PriceVector& p, const SolverOptions& opts = {});

SolveResult solve(const EquilibriumMap& q, const PriceVector& p0, const SolverOptions& opts = {});

/// CSV with header `sweep,<label>...,residual_sup,is_sub,is_super`; row 0 is
/// the starting point. Floats are written with 17 significant digits.
void write_trace_csv(const SolveTrace& trace, std::ostream& out);

/// "%.17g" rendering shared by every CSV writer.
std::string format_double(double v);

}  // namespace zmeq
