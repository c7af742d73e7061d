#include <cmath>
#include <random>

#include "doctest.h"
#include "support/random_markets.hpp"
#include "zmeq/core/checks.hpp"
#include "zmeq/core/errors.hpp"
#include "zmeq/core/solver.hpp"
#include "zmeq/transfer/maps.hpp"
#include "zmeq/transfer/recovery.hpp"

using namespace zmeq;
using namespace zmeq::testing;

namespace {

// Bisection-only twin of a map, to compare against closed-form updates.
FunctionMap without_closed_form(const EquilibriumMap& q) {
  return FunctionMap(q.coordinates(), [&q](std::size_t z, double pi, std::span<const double> p) {
    return q.residual(z, pi, p);
  });
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("quadratic root in log form") {
  CHECK(log_quadratic_root(-INFINITY, 1.0) == 0.0);
  for (double log_s : {-30.0, -2.0, 0.0, 0.7, 5.0, 40.0, 300.0}) {
    for (double n : {0.5, 1.0, 3.0}) {
      const double a = std::exp(log_quadratic_root(log_s, n));
      const double s = std::exp(log_s);
      // a^2 + S a - n = 0, relative to the size of the terms.
      CHECK(std::abs(a * a + s * a - n) <= 1e-12 * (a * a + s * a + n));
    }
  }
}

TEST_CASE("1x1 TU market against a nested bisection oracle") {
  const auto market = tu_market(Matrix{{0.0}}, {1.0}, {1.0}, 1.0, true);
  const auto q = build_transfer_map(market);
  const auto res = solve(q, singles_supersolution(q));
  CHECK(res.residual_sup <= 1e-10);

  // For fixed p_x, solve the y equation; then solve the x equation in p_x.
  auto py_of = [](double px) {
    return bisect([px](double py) { return 1.0 - std::exp((px - py) / 2.0) - std::exp(-py); }, -50.0, 50.0);
  };
  const double px = bisect(
      [&](double x) {
        const double py = py_of(x);
        return std::exp((x - py) / 2.0) + std::exp(x) - 1.0;
      },
      -50.0, 50.0);
  CHECK(std::abs(res.solution[0] - px) <= 1e-9);
  CHECK(std::abs(res.solution[1] - py_of(px)) <= 1e-9);
  CHECK(std::abs(px + std::log(2.0)) <= 1e-9);

  const auto eq = recover_equilibrium(q, res.solution);
  CHECK(feasibility_residual(market, eq) <= 1e-9);
  CHECK(eq.mu(0, 0) > 0.0);
  CHECK(frontier_gap(market, eq) <= 1e-12);
}

TEST_CASE("Sinkhorn update agrees with bisection") {
  std::mt19937_64 rng(21);
  const auto market = random_tu_market(rng, 4, 5, 0.7);
  const auto q = build_transfer_map(market);
  const auto slow = without_closed_form(q);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> p(q.size());
    for (auto& v : p) v = u(rng);
    const PriceVector pv(q.coordinates(), p);
    for (std::size_t z = 0; z < q.size(); ++z) {
      CHECK(std::abs(sinkhorn_update(q, z, pv) - coordinate_update(slow, z, pv)) <= 1e-8);
    }
  }
}

TEST_CASE("marginal identity right after an x update") {
  std::mt19937_64 rng(4);
  const auto market = random_tu_market(rng, 3, 6);
  const auto q = build_transfer_map(market);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> p(q.size());
    for (auto& v : p) v = u(rng);
    for (std::size_t x = 0; x < market.num_x(); ++x) p[x] = *q.closed_form_update(x, p);
    const auto eq = recover_equilibrium(q, PriceVector(q.coordinates(), p));
    for (std::size_t x = 0; x < market.num_x(); ++x) {
      double row = eq.mu_x0[x];
      for (std::size_t y = 0; y < market.num_y(); ++y) row += eq.mu(x, y);
      CHECK(std::abs(row - market.n()[x]) <= 1e-12 * market.n()[x]);
    }
  }
}

TEST_CASE("supersolution and subsolution constructions") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const auto market = k % 2 ? random_tu_market(rng, 3, 4) : random_tax_market(rng, 3, 4, 0.5, 0.3);
    const auto q = build_transfer_map(market);
    const auto hi = singles_supersolution(q);
    const auto lo = singles_subsolution(q);
    CHECK(is_supersolution(q, hi));
    CHECK_FALSE(is_subsolution(q, hi));
    CHECK(is_subsolution(q, lo));
    CHECK(less_equal(lo, hi));
  }
}

TEST_CASE("symmetric TU market: p_x = -p_y") {
  const auto market = tu_market(Matrix{{0.3, -0.5}, {-0.5, 0.8}}, {1.0, 1.5}, {1.0, 1.5}, 1.0, true);
  const auto q = build_transfer_map(market);
  const auto res = solve(q, singles_supersolution(q));
  CHECK(std::abs(res.solution[0] + res.solution[2]) <= 1e-9);
  CHECK(std::abs(res.solution[1] + res.solution[3]) <= 1e-9);
}

TEST_CASE("taxes market: solve, recover, wages") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 5; ++k) {
    const auto market = random_tax_market(rng, 4, 3, 0.5, 0.2, 0.8);
    const auto q = build_transfer_map(market);
    CHECK_FALSE(q.closed_form_update(0, std::vector<double>(q.size(), 0.0)).has_value());
    const auto res = solve(q, singles_supersolution(q));
    CHECK(res.residual_sup <= 1e-10);
    for (const auto& r : res.trace.sweeps) CHECK(r.nonincreasing);
    const auto eq = recover_equilibrium(q, res.solution);
    CHECK(feasibility_residual(market, eq) <= 1e-9);
    CHECK(frontier_gap(market, eq) <= 1e-10);
    const auto wages = recover_wages(market, eq);
    CHECK(wages.worker_gap <= 1e-8);
  }
}

TEST_CASE("wages: no-tax and TU cases") {
  const auto tu = tu_market(Matrix{{0.0, 0.0}}, {1.0}, {0.5, 2.0}, 1.0, true);
  const auto q = build_transfer_map(tu);
  const auto eq = recover_equilibrium(q, solve(q, singles_supersolution(q)).solution);
  const auto w = recover_wages(tu, eq);
  for (std::size_t y = 0; y < 2; ++y) {
    const double v = eq.v[y] + std::log(eq.mu(0, y) / tu.m()[y]);
    CHECK(w.w(0, y) == doctest::Approx(-v).epsilon(1e-14));
  }
  CHECK(w.worker_gap <= 1e-10);

  const auto notax = numbered_market(1, 1, {1.0}, {1.0}, {TaxFrontier{0.0, 1.0, TaxSchedule()}}, 1.0, true);
  const auto qn = build_transfer_map(notax);
  const auto en = recover_equilibrium(qn, solve(qn, singles_supersolution(qn)).solution);
  const auto wn = recover_wages(notax, en);
  const double un = en.u[0] + std::log(en.mu(0, 0));
  CHECK(std::abs(invert_net_wage(TaxSchedule(), un) - wn.w(0, 0)) <= 1e-10);

  const auto ntu = numbered_market(1, 1, {1.0}, {1.0}, {NtuFrontier{0.0, 0.0}}, 1.0, true);
  const auto qt = build_transfer_map(ntu);
  const auto et = recover_equilibrium(qt, solve(qt, singles_supersolution(qt)).solution);
  CHECK_THROWS_AS(recover_wages(ntu, et), UnsupportedFrontier);
}

TEST_CASE("property: unique solution from independent starts") {
  std::mt19937_64 rng(30);
  const auto market = random_tax_market(rng, 4, 4, 0.4, 0.5);
  const auto q = build_transfer_map(market);
  const auto ref = solve(q, singles_supersolution(q)).solution;
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> p(q.size());
    for (auto& v : p) v = u(rng);
    const auto s = solve(q, PriceVector(q.coordinates(), p)).solution;
    CHECK(sup_distance(s.values(), ref.values()) <= 1e-7);
  }
}

TEST_CASE("property: aggregates strictly isotone") {
  std::mt19937_64 rng(31);
  const auto market = random_tax_market(rng, 3, 4, 0.3, 0.0);
  const auto q = build_transfer_map(market);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> up(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> p(q.size());
    std::vector<double> pp(q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = u(rng);
      pp[i] = p[i] + (i == static_cast<std::size_t>(k) % p.size() ? 0.01 + up(rng) : up(rng));
    }
    const auto a = q.evaluate(PriceVector(q.coordinates(), p));
    const auto b = q.evaluate(PriceVector(q.coordinates(), pp));
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sa += a[i];
      sb += b[i];
    }
    CHECK(sa < sb);
  }
}

TEST_CASE("full assignment TU") {
  std::mt19937_64 rng(40);
  const auto market = random_balanced_tu_market(rng, 3, 4);
  const auto q = build_full_assignment_map(market, "y1", 0.0);
  CHECK(q.size() == 6u);
  CHECK(q.flags().m0_function);
  CHECK_FALSE(q.flags().m_function);

  const auto slow = without_closed_form(q);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> p(q.size());
    for (auto& v : p) v = u(rng);
    const PriceVector pv(q.coordinates(), p);
    for (std::size_t z = 0; z < q.size(); ++z) {
      CHECK(std::abs(coordinate_update(q, z, pv) - coordinate_update(slow, z, pv)) <= 1e-8);
    }
  }

  const auto start = full_assignment_supersolution(q);
  CHECK(is_supersolution(q, start));
  CHECK_FALSE(is_subsolution(q, start));
  const auto res = solve(q, start);
  CHECK(res.residual_sup <= 1e-10);
  const auto eq = recover_equilibrium(q, res.solution);
  CHECK(eq.mu_x0.empty());
  CHECK(feasibility_residual(market, eq) <= 1e-9);
  CHECK(q.expand(res.solution).at("y1") == 0.0);
}

TEST_CASE("full assignment comparative statics in pi") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 3; ++k) {
    const auto market = random_balanced_tu_market(rng, 4, 3);
    std::vector<double> prev;
    for (double pi : {0.0, 0.5, 1.0, 1.5, 2.0}) {
      const auto q = build_full_assignment_map(market, "y2", pi);
      const auto s = solve(q, full_assignment_supersolution(q)).solution;
      if (!prev.empty()) {
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] >= prev[i] - 1e-8);
      }
      prev.assign(s.values().begin(), s.values().end());
    }
  }
}

TEST_CASE("full assignment with taxes uses bisection") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const TaxSchedule schedule({{0.0, 0.0}, {0.4, 0.5}});
  std::vector<Frontier> f;
  for (int k = 0; k < 6; ++k) f.emplace_back(TaxFrontier{u(rng), u(rng), schedule});
  const auto market = numbered_market(2, 3, {1.0, 2.0}, {0.5, 1.5, 1.0}, f, 1.0, false);
  const auto q = build_full_assignment_map(market, "y1", 0.0);
  const auto res = solve(q, full_assignment_supersolution(q));
  CHECK(res.residual_sup <= 1e-10);
  const auto eq = recover_equilibrium(q, res.solution);
  CHECK(frontier_gap(market, eq) <= 1e-10);
}

TEST_CASE("OT map has constant aggregates") {
  std::mt19937_64 rng(50);
  const auto market = random_balanced_tu_market(rng, 3, 3);
  const auto q = build_ot_map(market);
  CHECK(q.flags().m0_function);
  CHECK_FALSE(q.flags().m_function);
  CHECK(check_m0_strong_set_order(q, 5000, 1).ok());

  const PriceVector p(q.coordinates(), {0.5, -1.25, 2.0, 0.75, -0.5, 1.0});
  std::vector<double> shifted(p.values().begin(), p.values().end());
  for (auto& v : shifted) v += 1.0;
  const auto a = q.evaluate(p);
  const auto b = q.evaluate(PriceVector(q.coordinates(), shifted));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  // Gauss-Seidel is classic Sinkhorn. Jacobi interleaves two Sinkhorn chains
  // whose limits can differ by a constant shift.
  SolverOptions gs;
  gs.mode = SweepMode::gauss_seidel;
  const auto res = solve(q, PriceVector::constant(q.coordinates(), 0.0), gs);
  CHECK(res.residual_sup <= 1e-10);
  const auto eq = recover_equilibrium(q, res.solution);
  CHECK(feasibility_residual(market, eq) <= 1e-9);
  CHECK(eq.u[0] == -res.solution[0]);

  CHECK_THROWS_AS(build_ot_map(random_tu_market(rng, 2, 2)), InvalidInput);
}

TEST_CASE("housing map is the NTU transfer map at sigma 1") {
  std::mt19937_64 rng(60);
  const auto market = random_housing_market(rng, 4, 3);
  const auto h = build_housing_map(market);
  const auto t = build_transfer_map(market);
  CHECK(h.flags().m_function);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> p(h.size());
    for (auto& v : p) v = u(rng);
    const PriceVector pv(h.coordinates(), p);
    const auto a = h.evaluate(pv);
    const auto b = t.evaluate(pv);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(build_housing_map(random_tu_market(rng, 2, 2)), UnsupportedFrontier);
}

TEST_CASE("housing: solve and the min identity") {
  std::mt19937_64 rng(61);
  const auto market = random_housing_market(rng, 10, 10);
  const auto q = build_housing_map(market);
  const auto from_above = solve(q, singles_supersolution(q));
  const auto from_below = solve(q, singles_subsolution(q));
  CHECK(from_above.residual_sup <= 1e-8);
  CHECK(sup_distance(from_above.solution.values(), from_below.solution.values()) <= 1e-7);
  const auto eq = recover_equilibrium(q, from_above.solution);
  for (std::size_t x = 0; x < 10; ++x) {
    for (std::size_t y = 0; y < 10; ++y) {
      const auto& f = std::get<NtuFrontier>(market.frontier(x, y));
      const double expected = std::min(eq.mu_x0[x] * std::exp(f.alpha), eq.mu_0y[y] * std::exp(f.gamma));
      CHECK(std::abs(eq.mu(x, y) - expected) <= 1e-9 * expected);
    }
  }
}

TEST_CASE("housing: decoupled limit") {
  std::vector<Frontier> f(4, NtuFrontier{-50.0, -50.0});
  const auto market = numbered_market(2, 2, {1.0, 2.0}, {3.0, 0.5}, f, 1.0, true);
  const auto q = build_housing_map(market);
  const auto s = solve(q, singles_supersolution(q)).solution;
  CHECK(std::abs(s[0] - std::log(1.0)) <= 1e-9);
  CHECK(std::abs(s[1] - std::log(2.0)) <= 1e-9);
  CHECK(std::abs(s[2] + std::log(3.0)) <= 1e-9);
  CHECK(std::abs(s[3] + std::log(0.5)) <= 1e-9);
}

TEST_CASE("housing full assignment is constructible, solving is experimental") {
  std::mt19937_64 rng(62);
  const auto market = random_housing_market(rng, 3, 3, false);
  const auto q = build_housing_full_assignment_map(market, "y1", 0.0);
  CHECK(q.flags().m0_function);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> up(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    std::vector<double> p(q.size());
    std::vector<double> pp(q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = u(rng);
      pp[i] = p[i] + up(rng);
    }
    const auto a = q.evaluate(PriceVector(q.coordinates(), p));
    const auto b = q.evaluate(PriceVector(q.coordinates(), pp));
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::isfinite(a[i]));
      sa += a[i];
      sb += b[i];
    }
    CHECK(sa <= sb + 1e-12);
  }
  CHECK_THROWS_AS(full_assignment_supersolution(q), UnsupportedFrontier);
  SolverOptions opts;
  opts.max_sweeps = 200;
  try {
    const auto res = solve(q, PriceVector::constant(q.coordinates(), 0.0), opts);
    CHECK(res.residual_sup <= opts.residual_tol);
  } catch (const ResponsivenessViolation&) {
  } catch (const MaxSweepsExceeded&) {
  }
}

TEST_CASE("non-integrability") {
  std::mt19937_64 rng(70);
  const auto tu = random_tu_market(rng, 3, 3);
  const auto p = PriceVector(tu.coordinates(), uniform_vector(rng, 6, -1.0, 1.0));
  CHECK(check_nonintegrability(tu, p, 1e-4).max_abs() <= 1e-5);

  // U = V = 0 with brackets {(0, 0), (0.5, 3)}: D^0 = 0, D^1 = 1, so the
  // second bracket is active with dD/dU = 2/3 and dD/dV = 1/3.
  const auto tax = numbered_market(1, 1, {1.0}, {1.0}, {TaxFrontier{0.0, 0.0, TaxSchedule({{0.0, 0.0}, {0.5, 3.0}})}},
                                   1.0, true);
  const auto a = check_nonintegrability(tax, PriceVector(tax.coordinates(), {0.0, 0.0}), 1e-4);
  CHECK(a(0, 0) > 1e-3);
  CHECK(a(0, 0) == doctest::Approx(std::exp(-1.0) / 3.0).epsilon(1e-6));

  // U - alpha = 1 > V - gamma = -1: dD/dU = 1, dD/dV = 0, D = 1.
  const auto ntu = numbered_market(1, 1, {1.0}, {1.0}, {NtuFrontier{0.0, 0.0}}, 1.0, true);
  const auto b = check_nonintegrability(ntu, PriceVector(ntu.coordinates(), {-1.0, -1.0}), 1e-4);
  CHECK(b(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("market validation") {
  CHECK_THROWS_AS(tu_market(Matrix{{0.0}}, {0.0}, {1.0}, 1.0, true), InvalidInput);
  CHECK_THROWS_AS(tu_market(Matrix{{0.0}}, {1.0}, {1.0}, 0.0, true), InvalidInput);
  CHECK_THROWS_AS(tu_market(Matrix{{0.0}}, {1.0}, {2.0}, 1.0, false), InvalidInput);
  CHECK_THROWS_AS(tu_market(Matrix{{0.0, 1.0}}, {1.0}, {1.0}, 1.0, true), InvalidInput);
  CHECK_THROWS_AS(AggregateMarket({"a"}, {"a"}, {1.0}, {1.0}, {TuFrontier{0.0}}, 1.0, true), InvalidInput);
  CHECK_THROWS_AS(build_transfer_map(tu_market(Matrix{{0.0}}, {1.0}, {1.0}, 1.0, false)), InvalidInput);
}
