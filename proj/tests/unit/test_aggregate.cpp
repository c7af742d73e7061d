#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support/random_markets.hpp"
#include "zmeq/core/errors.hpp"
#include "zmeq/matching/aggregate.hpp"
#include "zmeq/matching/individual.hpp"

using namespace zmeq;
using zmeq::testing::random_aggregate_market;
using zmeq::testing::random_individual_market;
using zmeq::testing::uniform_matrix;
using zmeq::testing::uniform_vector;

namespace {

// Best value of max sum_y a_y w_y s.t. sum_y w_y <= budget, 0 <= w_y <= cap_y,
// by enumerating basic solutions: every variable sits at 0 or its cap, except
// at most one that absorbs the remaining budget.
double row_lp_oracle(const std::vector<double>& a, const std::vector<double>& cap, double budget) {
  const std::size_t k = a.size();
  double best = 0.0;
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    std::vector<int> state(k);
    int free_count = 0;
    for (std::size_t i = 0; i < k; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
      if (state[i] == 2) ++free_count;
    }
    if (free_count > 1) continue;
    double used = 0.0, value = 0.0;
    bool feasible = true;
    for (std::size_t i = 0; i < k; ++i) {
      if (state[i] == 1) {
        used += cap[i];
        value += a[i] * cap[i];
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (state[i] == 2) {
        const double w = budget - used;
        if (w < 0.0 || w > cap[i]) feasible = false;
        value += a[i] * w;
        used += w;
      }
    }
    if (feasible && used <= budget + 1e-12) best = std::max(best, value);
  }
  return best;
}

double row_value(const Matrix& w, const Matrix& a, std::size_t x) {
  double s = 0.0;
  for (std::size_t y = 0; y < w.cols(); ++y) s += w(x, y) * a(x, y);
  return s;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

}  // namespace

TEST_CASE("aggregate market validation") {
  CHECK_THROWS_AS(AggregateNTMarket({1.0}, {0.0}, Matrix{{1}}, Matrix{{1}}), InvalidInput);
  CHECK_THROWS_AS(AggregateNTMarket({1.0}, {1.0}, Matrix{{1, 2}}, Matrix{{1}}), InvalidInput);
  const AggregateNTMarket ok({2.0}, {1.0}, Matrix{{1}}, Matrix{{1}});
  CHECK(ok.x_labels()[0] == "x1");
  CHECK(ok.y_labels()[0] == "y1");
}

TEST_CASE("is_equilibrium_matching examples") {
  const AggregateNTMarket m({1.0, 1.0}, {1.0, 1.0}, Matrix{{2, 1}, {1, 2}}, Matrix{{1, 2}, {2, 1}});
  AggregateNTOutcome zero{Matrix(2, 2), {1, 1}, {1, 1}, {0, 0}, {0, 0}};
  const auto vs = is_equilibrium_matching(m, zero);
  REQUIRE_FALSE(vs.empty());
  CHECK(vs[0].condition == MatchingCondition::blocking_pair);

  const IndividualMarket im(Matrix{{2, 1}, {1, 2}}, Matrix{{1, 2}, {2, 1}});
  for (const auto& o : enumerate_stable(im)) CHECK(is_equilibrium_matching(lift_market(im), lift_outcome(im, o)).empty());

  AggregateNTOutcome unbalanced{Matrix{{1, 0}, {0, 0.5}}, {0, 0}, {0, 0.5}, {2, 2}, {1, 0}};
  const auto ub = is_equilibrium_matching(m, unbalanced);
  CHECK(std::any_of(ub.begin(), ub.end(), [](const Violation& v) { return v.condition == MatchingCondition::feasibility; }));
}

TEST_CASE("weak complementarity burns utility on one side") {
  const AggregateNTMarket m({2.0}, {1.0}, Matrix{{1}}, Matrix{{1}});
  AggregateNTOutcome o{Matrix{{1}}, {1}, {0}, {0}, {1}};
  CHECK(is_equilibrium_matching(m, o).empty());
  o.v[0] = 0.5;
  const auto vs = is_equilibrium_matching(m, o);
  REQUIRE(vs.size() == 2u);
  CHECK(vs[0].condition == MatchingCondition::blocking_pair);
  CHECK(vs[1].condition == MatchingCondition::weak_complementarity);
}

TEST_CASE("proposal and disposal phase examples") {
  const Matrix huge{{10, 10, 10}};
  const auto p = proposal_phase(huge, Matrix{{1, 3, 2}}, std::vector<double>{4});
  CHECK(p == Matrix{{0, 4, 0}});
  const auto capped = proposal_phase(Matrix{{1, 2, 10}}, Matrix{{1, 3, 2}}, std::vector<double>{4});
  CHECK(capped == Matrix{{0, 2, 2}});
  CHECK(proposal_phase(huge, Matrix{{-1, -3, -2}}, std::vector<double>{4}) == Matrix(1, 3));
  // Ties go to the lower column.
  CHECK(proposal_phase(huge, Matrix{{1, 1, 1}}, std::vector<double>{4}) == Matrix{{4, 0, 0}});

  const auto k = disposal_phase(transpose(huge), Matrix{{1}, {3}, {2}}, std::vector<double>{4});
  CHECK(k == Matrix{{0}, {4}, {0}});
  CHECK(disposal_phase(transpose(huge), Matrix{{-1}, {-3}, {-2}}, std::vector<double>{4}) == Matrix(3, 1));
  CHECK_THROWS_AS(proposal_phase(huge, Matrix{{1, 2}}, std::vector<double>{1}), InvalidInput);
}

TEST_CASE("greedy phases reach the linear program optimum") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto avail = uniform_matrix(rng, 4, 4, 0.0, 2.0);
    const auto alpha = uniform_matrix(rng, 4, 4, -1.0, 2.0);
    const auto n = uniform_vector(rng, 4, 0.0, 5.0);
    const auto p = proposal_phase(avail, alpha, n);
    for (std::size_t x = 0; x < 4; ++x) {
      std::vector<double> a(4), cap(4);
      double sum = 0.0;
      for (std::size_t y = 0; y < 4; ++y) {
        a[y] = alpha(x, y);
        cap[y] = avail(x, y);
        sum += p(x, y);
        CHECK(p(x, y) >= 0.0);
        CHECK(p(x, y) <= avail(x, y));
      }
      CHECK(sum <= n[x] + 1e-12);
      CHECK(row_value(p, alpha, x) == doctest::Approx(row_lp_oracle(a, cap, n[x])).epsilon(1e-12));
    }
    const auto gamma = uniform_matrix(rng, 4, 4, -1.0, 2.0);
    const auto m = uniform_vector(rng, 4, 0.0, 5.0);
    const auto k = disposal_phase(p, gamma, m);
    const auto kt = transpose(k);
    const auto gt = transpose(gamma);
    for (std::size_t y = 0; y < 4; ++y) {
      std::vector<double> g(4), cap(4);
      for (std::size_t x = 0; x < 4; ++x) {
        g[x] = gamma(x, y);
        cap[x] = p(x, y);
        CHECK(k(x, y) <= p(x, y));
      }
      CHECK(row_value(kt, gt, y) == doctest::Approx(row_lp_oracle(g, cap, m[y])).epsilon(1e-12));
    }
  }
}

TEST_CASE("dalm: two workers and one firm") {
  const AggregateNTMarket m({2.0}, {1.0}, Matrix{{1}}, Matrix{{1}});
  const auto r = dalm(m);
  CHECK(r.outcome.mu(0, 0) == 1.0);
  CHECK(r.outcome.mu_x0[0] == 1.0);
  CHECK(r.outcome.mu_0y[0] == 0.0);
  CHECK(r.outcome.u[0] == 0.0);
  CHECK(r.outcome.v[0] == 1.0);
  CHECK(is_equilibrium_matching(m, r.outcome).empty());
}

TEST_CASE("dalm: nobody acceptable") {
  const AggregateNTMarket m({1.0, 2.0}, {1.5}, Matrix{{-1}, {-2}}, Matrix{{1}, {2}});
  const auto r = dalm(m);
  CHECK(r.outcome.mu == Matrix(2, 1));
  CHECK(r.outcome.mu_x0 == std::vector<double>{1.0, 2.0});
  CHECK(r.outcome.mu_0y == std::vector<double>{1.5});
  CHECK(is_equilibrium_matching(m, r.outcome).empty());
}

TEST_CASE("dalm on random markets") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_aggregate_market(rng, 5, 5);
    const auto r = dalm(m);
    for (std::size_t t = 0; t < r.rounds.size(); ++t) {
      const auto& round = r.rounds[t];
      for (std::size_t x = 0; x < 5; ++x) {
        double row = 0.0;
        for (std::size_t y = 0; y < 5; ++y) {
          row += round.proposed(x, y);
          CHECK(round.proposed(x, y) - round.kept(x, y) >= 0.0);
          if (t > 0) CHECK(round.available(x, y) <= r.rounds[t - 1].available(x, y));
        }
        CHECK(row <= m.n()[x] * (1 + 1e-12));
      }
      for (std::size_t y = 0; y < 5; ++y) {
        double col = 0.0;
        for (std::size_t x = 0; x < 5; ++x) col += round.kept(x, y);
        CHECK(col <= m.m()[y] * (1 + 1e-12));
      }
    }
    const auto vs = is_equilibrium_matching(m, r.outcome, 1e-9);
    CHECK(vs.empty());
  }
}

TEST_CASE("dalm with tied utilities") {
  std::mt19937_64 rng(56);
  std::uniform_int_distribution<int> small(-1, 2);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix alpha(4, 4), gamma(4, 4);
    for (std::size_t k = 0; k < 16; ++k) {
      alpha(k / 4, k % 4) = small(rng);
      gamma(k / 4, k % 4) = small(rng);
    }
    const AggregateNTMarket m(uniform_vector(rng, 4, 0.5, 3.0), uniform_vector(rng, 4, 0.5, 3.0), alpha, gamma);
    CHECK(is_equilibrium_matching(m, dalm(m).outcome, 1e-9).empty());
  }
}

TEST_CASE("dalm on singleton types equals deferred acceptance") {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 50; ++trial) {
    const auto im = random_individual_market(rng, 5, 5);
    const auto r = dalm(lift_market(im));
    const auto da = deferred_acceptance(im);
    CHECK(rounded_matching(r.outcome) == da.firm_of);
    CHECK(is_equilibrium_matching(lift_market(im), r.outcome).empty());
  }
}

TEST_CASE("dalm round budget") {
  const AggregateNTMarket m({1.0, 1.0}, {1.0}, Matrix{{1}, {1}}, Matrix{{1}, {2}});
  DalmOptions opts;
  opts.max_rounds = 1;
  try {
    dalm(m, opts);
    FAIL("expected MaxRoundsExceeded");
  } catch (const MaxRoundsExceeded& e) {
    CHECK(e.rounds().size() == 1u);
  }
}
