#include "zmeq/core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace zmeq {

void SolverOptions::validate(std::size_t dimension) const {
  if (!(residual_tol > 0.0)) throw InvalidInput("residual_tol must be > 0");
  if (!(step_tol >= 0.0)) throw InvalidInput("step_tol must be >= 0");
  if (max_sweeps < 1) throw InvalidInput("max_sweeps must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidInput("damping must lie in (0, 1]");
  root_finder.validate();
  if (!sweep_order.empty()) {
    if (sweep_order.size() != dimension) throw InvalidInput("sweep_order is not a permutation of the coordinates");
    std::vector<bool> seen(dimension, false);
    for (std::size_t z : sweep_order) {
      if (z >= dimension || seen[z]) throw InvalidInput("sweep_order is not a permutation of the coordinates");
      seen[z] = true;
    }
  }
}

MaxSweepsExceeded::MaxSweepsExceeded(SolveTrace trace, bool diverged, const std::string& detail)
    : Error(detail), trace_(std::move(trace)), diverged_(diverged) {}

namespace {

void require_same(const EquilibriumMap& q, const PriceVector& p) {
  if (!same_coordinates(p.coordinates(), *q.coordinates())) {
    throw InvalidInput("price vector does not live on the map's coordinate set");
  }
}

double update_raw(const EquilibriumMap& q, std::size_t z, std::span<const double> p, const BracketOptions& bracket) {
  if (auto closed = q.closed_form_update(z, p)) return *closed;
  const std::string& label = q.coordinates()->label(z);
  try {
    return smallest_root([&](double pi) { return q.residual(z, pi, p); }, bracket, p[z]);
  } catch (const ResponsivenessViolation& e) {
    if (!e.label().empty()) throw;
    // Re-raise with the coordinate attached.
    std::string what = e.what();
    const std::string prefix = "responsiveness violated: ";
    if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
    throw ResponsivenessViolation(label, what);
  } catch (const NonFiniteResidual& e) {
    if (!e.label().empty()) throw;
    throw NonFiniteResidual(label, e.value());
  }
}

std::vector<double> jacobi_raw(const EquilibriumMap& q, std::span<const double> p, const SolverOptions& opts) {
  std::vector<double> next(p.size());
  for (std::size_t z = 0; z < p.size(); ++z) {
    const double t = update_raw(q, z, p, opts.root_finder);
    next[z] = opts.damping == 1.0 ? t : p[z] + opts.damping * (t - p[z]);
  }
  return next;
}

std::vector<double> gauss_seidel_raw(const EquilibriumMap& q, std::span<const double> p, const SolverOptions& opts) {
  std::vector<double> cur(p.begin(), p.end());
  auto step = [&](std::size_t z) {
    const double t = update_raw(q, z, cur, opts.root_finder);
    cur[z] = opts.damping == 1.0 ? t : cur[z] + opts.damping * (t - cur[z]);
  };
  if (opts.sweep_order.empty()) {
    for (std::size_t z = 0; z < cur.size(); ++z) step(z);
  } else {
    for (std::size_t z : opts.sweep_order) step(z);
  }
  return cur;
}

SweepRecord make_record(int sweep, std::vector<double> values, std::span<const double> residuals,
                        const std::vector<double>* previous, double flag_tol) {
  SweepRecord r;
  r.sweep = sweep;
  r.is_subsolution = true;
  r.is_supersolution = true;
  for (double v : residuals) {
    r.residual_sup = std::max(r.residual_sup, std::abs(v));
    if (v > flag_tol) r.is_subsolution = false;
    if (v < -flag_tol) r.is_supersolution = false;
  }
  if (previous) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < (*previous)[i]) r.nondecreasing = false;
      if (values[i] > (*previous)[i]) r.nonincreasing = false;
    }
  }
  r.values = std::move(values);
  return r;
}

}  // namespace

bool is_subsolution(const EquilibriumMap& q, const PriceVector& p, double tol) {
  const ExcessVector e = q.evaluate(p);
  return std::all_of(e.values().begin(), e.values().end(), [tol](double v) { return v <= tol; });
}

bool is_supersolution(const EquilibriumMap& q, const PriceVector& p, double tol) {
  const ExcessVector e = q.evaluate(p);
  return std::all_of(e.values().begin(), e.values().end(), [tol](double v) { return v >= -tol; });
}

double residual_sup(const EquilibriumMap& q, const PriceVector& p) { return q.evaluate(p).sup_norm(); }

double coordinate_update(const EquilibriumMap& q, std::size_t z, const PriceVector& p, const SolverOptions& opts) {
  require_same(q, p);
  if (z >= q.size()) throw InvalidInput("coordinate index out of range");
  return update_raw(q, z, p.values(), opts.root_finder);
}

PriceVector jacobi_sweep(const EquilibriumMap& q, const PriceVector& p, const SolverOptions& opts) {
  require_same(q, p);
  opts.validate(q.size());
  return PriceVector(p.coordinates_ptr(), jacobi_raw(q, p.values(), opts));
}

PriceVector gauss_seidel_sweep(const EquilibriumMap& q, const PriceVector& p, const SolverOptions& opts) {
  require_same(q, p);
  opts.validate(q.size());
  return PriceVector(p.coordinates_ptr(), gauss_seidel_raw(q, p.values(), opts));
}

SolveResult solve(const EquilibriumMap& q, const PriceVector& p0, const SolverOptions& opts) {
  require_same(q, p0);
  opts.validate(q.size());

  SolveTrace trace;
  trace.coordinates = q.coordinates();
  const std::size_t n = q.size();
  std::vector<double> residuals(n);
  std::vector<double> p(p0.values().begin(), p0.values().end());

  q.evaluate(p, residuals);
  trace.initial = make_record(0, p, residuals, nullptr, opts.residual_tol);
  if (trace.initial.residual_sup <= opts.residual_tol) {
    const double r = trace.initial.residual_sup;
    return SolveResult{p0, std::move(trace), r};
  }

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    std::vector<double> next =
        opts.mode == SweepMode::jacobi ? jacobi_raw(q, p, opts) : gauss_seidel_raw(q, p, opts);

    for (std::size_t z = 0; z < n; ++z) {
      if (!std::isfinite(next[z])) {
        throw MaxSweepsExceeded(std::move(trace), true,
                                "iterates diverged: '" + q.coordinates()->label(z) + "' is not finite at sweep " +
                                    std::to_string(sweep));
      }
    }
    try {
      q.evaluate(next, residuals);
    } catch (const NonFiniteResidual& e) {
      // Overflow at a finite iterate reached from a finite start is divergence;
      // NaN is a modeling error and propagates.
      if (!std::isinf(e.value())) throw;
      throw MaxSweepsExceeded(std::move(trace), true,
                              "iterates diverged: residual of '" + e.label() + "' overflowed at sweep " +
                                  std::to_string(sweep));
    }

    const double step = sup_distance(next, p);
    trace.sweeps.push_back(make_record(sweep, next, residuals, &p, opts.residual_tol));
    const double res = trace.sweeps.back().residual_sup;
    p = std::move(next);
    if (res <= opts.residual_tol || (opts.step_tol > 0.0 && step <= opts.step_tol)) {
      return SolveResult{PriceVector(p0.coordinates_ptr(), p), std::move(trace), res};
    }
  }
  const double last = trace.sweeps.empty() ? trace.initial.residual_sup : trace.sweeps.back().residual_sup;
  throw MaxSweepsExceeded(std::move(trace), false,
                          "no convergence within " + std::to_string(opts.max_sweeps) +
                              " sweeps (residual " + format_double(last) + ")");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const SolveTrace& trace, std::ostream& out) {
  out << "sweep";
  if (trace.coordinates) {
    for (const auto& label : trace.coordinates->labels()) out << ',' << label;
  }
  out << ",residual_sup,is_sub,is_super\n";
  auto row = [&out](const SweepRecord& r) {
    out << r.sweep;
    for (double v : r.values) out << ',' << format_double(v);
    out << ',' << format_double(r.residual_sup) << ',' << (r.is_subsolution ? 1 : 0) << ','
        << (r.is_supersolution ? 1 : 0) << '\n';
  };
  row(trace.initial);
  for (const auto& r : trace.sweeps) row(r);
}

}  // namespace zmeq
