#include "zmeq/cli/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>

#include "CLI11.hpp"
#include "model_file.hpp"
#include "zmeq/core/checks.hpp"
#include "zmeq/core/linear_maps.hpp"
#include "zmeq/core/solver.hpp"
#include "zmeq/matching/adachi.hpp"
#include "zmeq/transfer/maps.hpp"
#include "zmeq/transfer/recovery.hpp"

namespace zmeq::cli {

namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string market;
  std::string outcome;
  std::string mode;
  double tol = SolverOptions{}.residual_tol;
  int max_sweeps = SolverOptions{}.max_sweeps;
  double damping = SolverOptions{}.damping;
  std::optional<std::uint64_t> seed;
  std::string out;
};

constexpr std::size_t kCheckSamples = 1000;

/// Files written under --out, remembered for the report.
class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {}

  bool enabled() const noexcept { return !dir_.empty(); }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    if (!enabled()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw OutputError("cannot create " + dir_.string() + ": " + ec.message());
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot write " + path.string());
    body(out);
    out.flush();
    if (!out) throw OutputError("failed while writing " + path.string());
    written_.push_back(path.string());
  }

  Json listing() const { return Json(written_); }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> written_;
};

std::string mode_name(SweepMode m) { return m == SweepMode::jacobi ? "jacobi" : "gauss-seidel"; }

SweepMode parse_mode(const std::string& text) {
  if (text == "jacobi") return SweepMode::jacobi;
  if (text == "gauss-seidel" || text == "gauss_seidel") return SweepMode::gauss_seidel;
  throw InputError("unknown mode \"" + text + "\" (expected jacobi or gauss-seidel)");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print(std::ostream& out, const Json& report) { out << report.dump(2) << '\n'; }

Json labeled(const Coordinates& coords, std::span<const double> values) {
  Json j = Json::object();
  for (std::size_t z = 0; z < values.size(); ++z) j[coords.label(z)] = values[z];
  return j;
}

// ---------------------------------------------------------------------------
// Price-based models

struct PreparedMap {
  std::unique_ptr<EquilibriumMap> map;
  std::optional<PriceVector> start;
  SweepMode default_mode = SweepMode::jacobi;
  const TwoSidedMap* two_sided = nullptr;
  const HedonicMap* hedonic = nullptr;
};

PriceVector explicit_start(const EquilibriumMap& q, const Json& values) {
  std::vector<double> p(q.size());
  for (std::size_t z = 0; z < q.size(); ++z) {
    const std::string& label = q.coordinates()->label(z);
    if (!values.contains(label) || !values.at(label).is_number()) {
      throw InputError("start: missing a numeric price for \"" + label + "\"");
    }
    p[z] = values.at(label).get<double>();
  }
  return PriceVector(q.coordinates(), std::move(p));
}

PriceVector two_sided_start(const TwoSidedModel& m, const TwoSidedMap& q) {
  switch (m.start) {
    case StartKind::zero: return PriceVector::constant(q.coordinates(), 0.0);
    case StartKind::explicit_values: return explicit_start(q, m.start_values);
    case StartKind::subsolution:
      if (m.full_assignment) throw InputError("full-assignment markets only have a supersolution start");
      return singles_subsolution(q);
    case StartKind::supersolution:
      return m.full_assignment ? full_assignment_supersolution(q) : singles_supersolution(q);
  }
  throw InternalError("unhandled start kind");
}

template <class MapT>
PreparedMap prepare_two_sided(const TwoSidedModel& m, MapT map) {
  PreparedMap out;
  auto owned = std::make_unique<MapT>(std::move(map));
  out.two_sided = owned.get();
  out.start = two_sided_start(m, *owned);
  out.default_mode = m.kind == "ot" ? SweepMode::gauss_seidel : SweepMode::jacobi;
  out.map = std::move(owned);
  return out;
}

PreparedMap prepare(const Model& model) {
  if (const auto* h = std::get_if<HedonicModel>(&model)) {
    PreparedMap out;
    auto owned = std::make_unique<HedonicMap>(build_hedonic_map(h->market));
    out.hedonic = owned.get();
    out.start = hedonic_supersolution(*owned);
    out.map = std::move(owned);
    return out;
  }
  if (const auto* t = std::get_if<TwoSidedModel>(&model)) {
    if (t->kind == "ot") {
      if (t->full_assignment) throw InputError("the ot model has no full-assignment variant");
      return prepare_two_sided(*t, build_ot_map(t->market));
    }
    if (t->kind == "housing") {
      if (t->full_assignment) {
        return prepare_two_sided(
            *t, build_housing_full_assignment_map(t->market, t->full_assignment->y0, t->full_assignment->pi));
      }
      return prepare_two_sided(*t, build_housing_map(t->market));
    }
    if (t->full_assignment) {
      return prepare_two_sided(*t,
                               build_full_assignment_map(t->market, t->full_assignment->y0, t->full_assignment->pi));
    }
    return prepare_two_sided(*t, build_transfer_map(t->market));
  }
  if (const auto* l = std::get_if<LinearModel>(&model)) {
    PreparedMap out;
    if (l->delta) {
      auto owned = std::make_unique<LinearMap>(constant_aggregate_map(*l->delta, l->a));
      if (l->labels != std::vector<std::string>(owned->coordinates()->labels())) {
        throw InputError("constant-aggregate linear models use the default labels 1, 2, ...");
      }
      out.map = std::move(owned);
    } else {
      out.map = std::make_unique<LinearMap>(linear_map(l->a, make_coordinates(l->labels)));
    }
    out.start = PriceVector(out.map->coordinates(), l->p0);
    return out;
  }
  throw InputError("this command needs a price-based model (hedonic, transfer, housing, ot or linear)");
}

SolverOptions solver_options(const Options& o, SweepMode fallback) {
  SolverOptions s;
  s.residual_tol = o.tol;
  s.max_sweeps = o.max_sweeps;
  s.damping = o.damping;
  s.mode = o.mode.empty() ? fallback : parse_mode(o.mode);
  return s;
}

Json flags_json(const StructureFlags& f) {
  return Json{{"z_function", f.z_function},
              {"diagonal_isotone", f.diagonal_isotone},
              {"m_function", f.m_function},
              {"m0_function", f.m0_function}};
}

Json report_json(const PropertyReport& r) {
  return Json{{"pairs", r.pairs_sampled}, {"comparable", r.comparable_pairs}, {"violations", r.violations.size()}};
}

Json structure_checks(const EquilibriumMap& q, std::uint64_t seed) {
  Json j{{"declared", flags_json(q.flags())}};
  if (q.flags().m_function) j["inverse_isotone"] = report_json(check_inverse_isotone(q, kCheckSamples, seed));
  if (q.flags().m0_function) j["m0_strong_set_order"] = report_json(check_m0_strong_set_order(q, kCheckSamples, seed));
  return j;
}

void write_solution_files(OutputDir& dir, const PreparedMap& pm, const PriceVector& p, const std::string& model) {
  const Coordinates& coords = p.coordinates();
  if (pm.hedonic) {
    const auto s = supply(pm.hedonic->market(), p.values());
    const auto d = demand(pm.hedonic->market(), p.values());
    dir.write("solution.csv", [&](std::ostream& o) {
      o << "label,price,supply,demand\n";
      for (std::size_t z = 0; z < p.size(); ++z) {
        o << coords.label(z) << ',' << format_double(p[z]) << ',' << format_double(s[z]) << ','
          << format_double(d[z]) << '\n';
      }
    });
  } else {
    dir.write("solution.csv", [&](std::ostream& o) {
      o << "label,price\n";
      for (std::size_t z = 0; z < p.size(); ++z) o << coords.label(z) << ',' << format_double(p[z]) << '\n';
    });
  }
  if (pm.two_sided) {
    const AggregateMarket& market = pm.two_sided->market();
    const auto eq = recover_equilibrium(*pm.two_sided, p);
    auto write_matrix = [&](const std::string& name, const Matrix& a) {
      dir.write(name, [&](std::ostream& o) {
        o << "x";
        for (const auto& y : market.y_labels()) o << ',' << y;
        o << '\n';
        for (std::size_t x = 0; x < market.num_x(); ++x) {
          o << market.x_labels()[x];
          for (std::size_t y = 0; y < market.num_y(); ++y) o << ',' << format_double(a(x, y));
          o << '\n';
        }
      });
    };
    write_matrix("mu.csv", eq.mu);
    dir.write("payoffs.csv", [&](std::ostream& o) {
      o << "side,label,payoff,unmatched\n";
      for (std::size_t x = 0; x < market.num_x(); ++x) {
        o << "x," << market.x_labels()[x] << ',' << format_double(eq.u[x]) << ','
          << format_double(eq.mu_x0.empty() ? 0.0 : eq.mu_x0[x]) << '\n';
      }
      for (std::size_t y = 0; y < market.num_y(); ++y) {
        o << "y," << market.y_labels()[y] << ',' << format_double(eq.v[y]) << ','
          << format_double(eq.mu_0y.empty() ? 0.0 : eq.mu_0y[y]) << '\n';
      }
    });
    bool wages = false;
    for (std::size_t x = 0; x < market.num_x(); ++x) {
      for (std::size_t y = 0; y < market.num_y(); ++y) {
        if (std::holds_alternative<TaxFrontier>(market.frontier(x, y))) wages = true;
      }
    }
    if (wages && !market.all_ntu()) {
      try {
        write_matrix("wages.csv", recover_wages(market, eq).w);
      } catch (const UnsupportedFrontier&) {
      }
    }
  }
  dir.write("outcome.json", [&](std::ostream& o) {
    o << Json{{"model", model}, {"prices", labeled(coords, p.values())}}.dump(2) << '\n';
  });
}

int solve_prices(const Model& model, const Options& o, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  PreparedMap pm = prepare(model);
  const SolverOptions opts = solver_options(o, pm.default_mode);
  OutputDir dir(o.out);
  Json report{{"command", "solve"}, {"model", model_name(model)}, {"mode", mode_name(opts.mode)}};
  try {
    const auto res = solve(*pm.map, *pm.start, opts);
    dir.write("trace.csv", [&](std::ostream& f) { write_trace_csv(res.trace, f); });
    write_solution_files(dir, pm, res.solution, model_name(model));
    report["status"] = "converged";
    report["sweeps"] = res.sweeps();
    report["residual_sup"] = res.residual_sup;
    report["solution"] = labeled(res.solution.coordinates(), res.solution.values());
  } catch (const MaxSweepsExceeded& e) {
    dir.write("trace.csv", [&](std::ostream& f) { write_trace_csv(e.trace(), f); });
    report["status"] = e.diverged() ? "diverged" : "max_sweeps_exceeded";
    report["sweeps"] = e.trace().sweeps.size();
    report["wall_time_s"] = seconds_since(t0);
    report["outputs"] = dir.listing();
    print(out, report);
    err << "error: " << e.what() << '\n';
    return kNoConvergence;
  }
  report["checks"] = structure_checks(*pm.map, o.seed.value_or(0));
  report["wall_time_s"] = seconds_since(t0);
  report["outputs"] = dir.listing();
  if (dir.enabled()) {
    dir.write("report.json", [&](std::ostream& f) { f << report.dump(2) << '\n'; });
    report["outputs"] = dir.listing();
  }
  print(out, report);
  return kOk;
}

// ---------------------------------------------------------------------------
// Matching models

Json violation_json(const Violation& v, const std::vector<std::string>& workers, const std::vector<std::string>& firms) {
  Json j{{"condition", condition_name(v.condition)}};
  j["worker"] = v.worker >= 0 ? Json(workers[v.worker]) : Json(nullptr);
  j["firm"] = v.firm >= 0 ? Json(firms[v.firm]) : Json(nullptr);
  j["detail"] = v.detail;
  return j;
}

Json individual_outcome_json(const IndividualMarket& m, const IndividualOutcome& o) {
  Json matching = Json::array();
  for (std::size_t i = 0; i < o.firm_of.size(); ++i) {
    if (o.firm_of[i] == kUnmatched) continue;
    matching.push_back(Json{{"worker", m.worker_labels()[i]}, {"firm", m.firm_labels()[o.firm_of[i]]}, {"mass", 1.0}});
  }
  Json u = Json::object(), v = Json::object();
  for (std::size_t i = 0; i < o.u.size(); ++i) u[m.worker_labels()[i]] = o.u[i];
  for (std::size_t j = 0; j < o.v.size(); ++j) v[m.firm_labels()[j]] = o.v[j];
  return Json{{"model", "nt"}, {"matching", matching}, {"u", u}, {"v", v}};
}

Json aggregate_outcome_json(const AggregateNTMarket& m, const AggregateNTOutcome& o) {
  Json matching = Json::array();
  for (std::size_t x = 0; x < m.num_x(); ++x) {
    for (std::size_t y = 0; y < m.num_y(); ++y) {
      if (o.mu(x, y) > 0.0) {
        matching.push_back(Json{{"worker", m.x_labels()[x]}, {"firm", m.y_labels()[y]}, {"mass", o.mu(x, y)}});
      }
    }
  }
  Json u = Json::object(), v = Json::object();
  for (std::size_t x = 0; x < m.num_x(); ++x) u[m.x_labels()[x]] = o.u[x];
  for (std::size_t y = 0; y < m.num_y(); ++y) v[m.y_labels()[y]] = o.v[y];
  return Json{{"model", "nt"}, {"matching", matching}, {"u", u}, {"v", v}};
}

void write_matching_files(OutputDir& dir, const Json& outcome) {
  dir.write("matching.csv", [&](std::ostream& f) {
    f << "worker,firm,mu\n";
    for (const auto& t : outcome.at("matching")) {
      f << t.at("worker").get<std::string>() << ',' << t.at("firm").get<std::string>() << ','
        << format_double(t.at("mass").get<double>()) << '\n';
    }
  });
  dir.write("payoffs.csv", [&](std::ostream& f) {
    f << "side,label,payoff\n";
    for (auto it = outcome.at("u").begin(); it != outcome.at("u").end(); ++it) {
      f << "worker," << it.key() << ',' << format_double(it.value().get<double>()) << '\n';
    }
    for (auto it = outcome.at("v").begin(); it != outcome.at("v").end(); ++it) {
      f << "firm," << it.key() << ',' << format_double(it.value().get<double>()) << '\n';
    }
  });
  dir.write("outcome.json", [&](std::ostream& f) { f << outcome.dump(2) << '\n'; });
}

int solve_matching(const Model& model, const Options& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  OutputDir dir(o.out);
  Json report{{"command", "solve"}, {"model", model_name(model)}};
  Json outcome;
  std::size_t violations = 0;
  if (const auto* nt = std::get_if<NtModel>(&model)) {
    const auto da = deferred_acceptance_traced(nt->market);
    report["algorithm"] = "deferred-acceptance";
    report["rounds"] = da.rounds.size();
    violations = is_stable(nt->market, da.outcome).size();
    outcome = individual_outcome_json(nt->market, da.outcome);
  } else {
    const auto& agg = std::get<NtAggregateModel>(model);
    DalmOptions opts;
    opts.max_rounds = o.max_sweeps;
    const auto r = dalm(agg.market, opts);
    report["algorithm"] = "dalm";
    report["rounds"] = r.rounds.size();
    violations = is_equilibrium_matching(agg.market, r.outcome).size();
    outcome = aggregate_outcome_json(agg.market, r.outcome);
  }
  if (violations != 0) throw InternalError("the computed matching fails its own stability check");
  report["status"] = "stable";
  report["violations"] = violations;
  report["outcome"] = outcome;
  write_matching_files(dir, outcome);
  report["wall_time_s"] = seconds_since(t0);
  report["outputs"] = dir.listing();
  print(out, report);
  return kOk;
}

// ---------------------------------------------------------------------------
// check

std::size_t index_of(const std::vector<std::string>& labels, const std::string& label, const std::string& where) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw InputError(where + ": unknown label \"" + label + "\"");
  return static_cast<std::size_t>(it - labels.begin());
}

std::vector<double> payoff_table(const Json& doc, const std::string& key, const std::vector<std::string>& labels,
                                 const std::string& file) {
  if (!doc.contains(key) || !doc.at(key).is_object()) throw InputError(file + ": at /" + key + ": expected an object");
  std::vector<double> out(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const Json& t = doc.at(key);
    if (!t.contains(labels[k]) || !t.at(labels[k]).is_number()) {
      throw InputError(file + ": at /" + key + ": missing a numeric payoff for \"" + labels[k] + "\"");
    }
    out[k] = t.at(labels[k]).get<double>();
  }
  return out;
}

struct Triple {
  std::size_t worker;
  std::size_t firm;
  double mass;
};

std::vector<Triple> matching_triples(const Json& doc, const std::vector<std::string>& workers,
                                     const std::vector<std::string>& firms, const std::string& file) {
  if (!doc.contains("matching") || !doc.at("matching").is_array()) {
    throw InputError(file + ": at /matching: expected an array");
  }
  std::vector<Triple> out;
  const Json& list = doc.at("matching");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = file + ": at /matching/" + std::to_string(k);
    const Json& t = list.at(k);
    if (!t.is_object() || !t.contains("worker") || !t.contains("firm") || !t.at("worker").is_string() ||
        !t.at("firm").is_string()) {
      throw InputError(where + ": expected {\"worker\": label, \"firm\": label, \"mass\": number}");
    }
    const double mass = t.contains("mass") && t.at("mass").is_number() ? t.at("mass").get<double>() : 1.0;
    out.push_back({index_of(workers, t.at("worker").get<std::string>(), where),
                   index_of(firms, t.at("firm").get<std::string>(), where), mass});
  }
  return out;
}

std::vector<Violation> check_individual(const IndividualMarket& m, const Json& doc, const std::string& file) {
  IndividualOutcome o;
  o.firm_of.assign(m.num_workers(), kUnmatched);
  o.worker_of.assign(m.num_firms(), kUnmatched);
  std::vector<Violation> found;
  for (const auto& t : matching_triples(doc, m.worker_labels(), m.firm_labels(), file)) {
    if (t.mass != 1.0) {
      found.push_back({MatchingCondition::feasibility, int(t.worker), int(t.firm), "individual matches carry mass 1"});
    }
    if (o.firm_of[t.worker] != kUnmatched || o.worker_of[t.firm] != kUnmatched) {
      found.push_back({MatchingCondition::feasibility, int(t.worker), int(t.firm), "agent matched twice"});
      continue;
    }
    o.firm_of[t.worker] = int(t.firm);
    o.worker_of[t.firm] = int(t.worker);
  }
  o.u = payoff_table(doc, "u", m.worker_labels(), file);
  o.v = payoff_table(doc, "v", m.firm_labels(), file);
  if (!found.empty()) return found;
  return is_stable(m, o);
}

std::vector<Violation> check_aggregate(const AggregateNTMarket& m, const Json& doc, const std::string& file,
                                       double tol) {
  AggregateNTOutcome o;
  o.mu = Matrix(m.num_x(), m.num_y());
  for (const auto& t : matching_triples(doc, m.x_labels(), m.y_labels(), file)) o.mu(t.worker, t.firm) += t.mass;
  o.mu_x0 = m.n();
  o.mu_0y = m.m();
  for (std::size_t x = 0; x < m.num_x(); ++x) {
    for (std::size_t y = 0; y < m.num_y(); ++y) {
      o.mu_x0[x] -= o.mu(x, y);
      o.mu_0y[y] -= o.mu(x, y);
    }
  }
  o.u = payoff_table(doc, "u", m.x_labels(), file);
  o.v = payoff_table(doc, "v", m.y_labels(), file);
  return is_equilibrium_matching(m, o, tol);
}

int run_check(const Model& model, const Options& o, bool tol_given, std::ostream& out) {
  const Json doc = read_json_file(o.outcome);
  Json report{{"command", "check"}, {"model", model_name(model)}};
  Json list = Json::array();
  if (const auto* nt = std::get_if<NtModel>(&model)) {
    for (const auto& v : check_individual(nt->market, doc, o.outcome)) {
      list.push_back(violation_json(v, nt->market.worker_labels(), nt->market.firm_labels()));
    }
  } else if (const auto* agg = std::get_if<NtAggregateModel>(&model)) {
    const double tol = tol_given ? o.tol : 1e-9;
    report["tol"] = tol;
    for (const auto& v : check_aggregate(agg->market, doc, o.outcome, tol)) {
      list.push_back(violation_json(v, agg->market.x_labels(), agg->market.y_labels()));
    }
  } else {
    const PreparedMap pm = prepare(model);
    if (!doc.contains("prices") || !doc.at("prices").is_object()) {
      throw InputError(o.outcome + ": at /prices: expected an object of prices");
    }
    const PriceVector p = explicit_start(*pm.map, doc.at("prices"));
    const auto q = pm.map->evaluate(p);
    report["tol"] = o.tol;
    report["residual_sup"] = q.sup_norm();
    for (std::size_t z = 0; z < q.size(); ++z) {
      if (std::abs(q[z]) > o.tol) {
        list.push_back(Json{{"condition", "market_clearing"},
                            {"coordinate", p.coordinates().label(z)},
                            {"detail", "|Q| = " + format_double(std::abs(q[z])) + " exceeds the tolerance"}});
      }
    }
  }
  report["violations"] = list;
  report["count"] = list.size();
  print(out, report);
  return list.empty() ? kOk : kViolations;
}

// ---------------------------------------------------------------------------
// enumerate and compare

int run_enumerate(const Model& model, const Options& o, std::ostream& out) {
  const auto* nt = std::get_if<NtModel>(&model);
  if (!nt) throw InputError("enumerate needs an individual nt market");
  const auto all = enumerate_stable(nt->market);
  Json list = Json::array();
  for (const auto& s : all) list.push_back(individual_outcome_json(nt->market, s));
  Json report{{"command", "enumerate"}, {"model", "nt"}, {"count", all.size()}, {"stable", list}};
  OutputDir dir(o.out);
  dir.write("stable.json", [&](std::ostream& f) { f << list.dump(2) << '\n'; });
  report["outputs"] = dir.listing();
  print(out, report);
  return kOk;
}

int compare_prices(const Model& model, const Options& o, std::ostream& out, std::ostream& err) {
  const PreparedMap pm = prepare(model);
  Json runs = Json::array();
  std::vector<std::optional<PriceVector>> solutions;
  for (SweepMode mode : {SweepMode::jacobi, SweepMode::gauss_seidel}) {
    Options forced = o;
    forced.mode = mode_name(mode);
    const SolverOptions opts = solver_options(forced, mode);
    const auto t0 = std::chrono::steady_clock::now();
    Json run{{"mode", mode_name(mode)}};
    try {
      const auto res = solve(*pm.map, *pm.start, opts);
      run["status"] = "converged";
      run["sweeps"] = res.sweeps();
      run["residual_sup"] = res.residual_sup;
      solutions.push_back(res.solution);
    } catch (const MaxSweepsExceeded& e) {
      run["status"] = e.diverged() ? "diverged" : "max_sweeps_exceeded";
      run["sweeps"] = e.trace().sweeps.size();
      solutions.push_back(std::nullopt);
      err << mode_name(mode) << ": " << e.what() << '\n';
    }
    run["wall_time_s"] = seconds_since(t0);
    runs.push_back(run);
  }
  Json report{{"command", "compare"}, {"model", model_name(model)}, {"runs", runs}};
  const bool both = solutions[0] && solutions[1];
  report["agreement_sup"] = both ? Json(sup_distance(solutions[0]->values(), solutions[1]->values())) : Json(nullptr);
  print(out, report);
  return both ? kOk : kNoConvergence;
}

int compare_matching(const NtModel& nt, std::ostream& out) {
  const auto da = deferred_acceptance_traced(nt.market);
  const auto wo = adachi_solve(nt.market, AdachiStart::worker_optimal);
  const auto fo = adachi_solve(nt.market, AdachiStart::firm_optimal);
  const bool equal = wo.outcome.u == da.outcome.u && wo.outcome.v == da.outcome.v;
  Json report{{"command", "compare"},
              {"model", "nt"},
              {"deferred_acceptance", Json{{"rounds", da.rounds.size()}}},
              {"adachi_worker_optimal", Json{{"sweeps", wo.trace.sweeps.size()}}},
              {"adachi_firm_optimal", Json{{"sweeps", fo.trace.sweeps.size()}}},
              {"u_equal", wo.outcome.u == da.outcome.u},
              {"v_equal", wo.outcome.v == da.outcome.v},
              {"same_as_firm_optimal", fo.outcome == da.outcome}};
  print(out, report);
  if (!equal) throw InternalError("deferred acceptance and Adachi's algorithm disagree");
  return kOk;
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "Sweep mode: jacobi or gauss-seidel (default depends on the model)")
      ->check(CLI::IsMember({"jacobi", "gauss-seidel", "gauss_seidel"}));
  cmd->add_option("--tol", o.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-sweeps", o.max_sweeps, "Sweep budget (round budget for DALM)")->check(CLI::PositiveNumber);
  cmd->add_option("--damping", o.damping, "Damping factor in (0, 1]");
  cmd->add_option("--seed", o.seed, "Seed for generated utilities and structure checks");
  cmd->add_option("--out", o.out, "Directory for CSV and JSON artifacts");
}

int dispatch(const std::string& command, const Options& o, bool tol_given, std::ostream& out, std::ostream& err) {
  const Json doc = read_json_file(o.market);
  const Model model = load_model(doc, o.market, o.seed);
  const bool matching = std::holds_alternative<NtModel>(model) || std::holds_alternative<NtAggregateModel>(model);
  if (command == "solve") return matching ? solve_matching(model, o, out) : solve_prices(model, o, out, err);
  if (command == "check") return run_check(model, o, tol_given, out);
  if (command == "enumerate") return run_enumerate(model, o, out);
  if (const auto* nt = std::get_if<NtModel>(&model)) return compare_matching(*nt, out);
  if (matching) throw InputError("compare is not available for aggregate nt markets");
  return compare_prices(model, o, out, err);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibrium solver for models with substitutes", "zmeq"};
  app.require_subcommand(1);
  Options o;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a market file");
  auto* check_cmd = app.add_subcommand("check", "Validate an outcome against a market");
  auto* enum_cmd = app.add_subcommand("enumerate", "List every stable matching of a small nt market");
  auto* compare_cmd = app.add_subcommand("compare", "Run both sweep modes (or DA and Adachi) and compare");
  for (auto* cmd : {solve_cmd, check_cmd, enum_cmd, compare_cmd}) {
    cmd->add_option("market", o.market, "Market file (JSON)")->required();
    add_common(cmd, o);
  }
  check_cmd->add_option("outcome", o.outcome, "Outcome file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kUsage;
  }

  std::string command;
  for (auto* cmd : {solve_cmd, check_cmd, enum_cmd, compare_cmd}) {
    if (cmd->parsed()) command = cmd->get_name();
  }
  bool tol_given = false;
  for (auto* cmd : {solve_cmd, check_cmd, enum_cmd, compare_cmd}) {
    if (cmd->parsed() && cmd->count("--tol") > 0) tol_given = true;
  }

  try {
    return dispatch(command, o, tol_given, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InvalidInput& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return kInputError;
  } catch (const InstanceTooLarge& e) {
    err << "error: instance too large: " << e.what() << '\n';
    return kInputError;
  } catch (const UnsupportedFrontier& e) {
    err << "error: unsupported frontier: " << e.what() << '\n';
    return kInputError;
  } catch (const MaxSweepsExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const MaxRoundsExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const ResponsivenessViolation& e) {
    err << "error: " << e.what() << '\n';
    return kResponsiveness;
  } catch (const NonFiniteResidual& e) {
    err << "error: " << e.what() << '\n';
    return kNonFinite;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << '\n';
    return kOutputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace zmeq::cli
