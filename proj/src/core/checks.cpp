#include "zmeq/core/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace zmeq {

namespace {

class PairSampler {
 public:
  PairSampler(std::size_t n, std::uint64_t seed, double scale) : n_(n), rng_(seed), scale_(scale) {}

  void next(std::vector<double>& p, std::vector<double>& pp) {
    std::uniform_real_distribution<double> base(-scale_, scale_);
    std::uniform_real_distribution<double> shift(0.0, scale_);
    std::uniform_real_distribution<double> jitter(-scale_ / 10.0, scale_ / 10.0);
    p.resize(n_);
    pp.resize(n_);
    for (auto& v : p) v = base(rng_);
    const int kind = static_cast<int>(count_++ % 4);
    for (std::size_t i = 0; i < n_; ++i) {
      switch (kind) {
        case 0: pp[i] = base(rng_); break;
        case 1: pp[i] = p[i] + shift(rng_); break;
        case 2: pp[i] = p[i] - shift(rng_); break;
        default: pp[i] = p[i] + jitter(rng_); break;
      }
    }
  }

 private:
  std::size_t n_;
  std::mt19937_64 rng_;
  double scale_;
  std::size_t count_ = 0;
};

bool leq(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] <= b[i])) return false;
  }
  return true;
}

bool approx_equal(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol * (1.0 + std::max(std::abs(a[i]), std::abs(b[i])))) return false;
  }
  return true;
}

template <class Verdict>
PropertyReport run(const EquilibriumMap& q, std::size_t samples, std::uint64_t seed, const SamplingOptions& opts,
                   Verdict violated) {
  PropertyReport report;
  PairSampler sampler(q.size(), seed, opts.scale);
  std::vector<double> p, pp, qp(q.size()), qpp(q.size());
  for (std::size_t s = 0; s < samples; ++s) {
    sampler.next(p, pp);
    q.evaluate(p, qp);
    q.evaluate(pp, qpp);
    ++report.pairs_sampled;
    if (!leq(qp, qpp)) continue;
    ++report.comparable_pairs;
    if (violated(p, pp, qp, qpp)) report.violations.push_back({p, pp});
  }
  return report;
}

}  // namespace

PropertyReport check_inverse_isotone(const EquilibriumMap& q, std::size_t sample_count, std::uint64_t seed,
                                     const SamplingOptions& opts) {
  return run(q, sample_count, seed, opts,
             [](const auto& p, const auto& pp, const auto&, const auto&) { return !leq(p, pp); });
}

PropertyReport check_m0_strong_set_order(const EquilibriumMap& q, std::size_t sample_count, std::uint64_t seed,
                                         const SamplingOptions& opts) {
  std::vector<double> lo(q.size()), hi(q.size()), qlo(q.size()), qhi(q.size());
  return run(q, sample_count, seed, opts, [&](const auto& p, const auto& pp, const auto& qp, const auto& qpp) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      lo[i] = std::min(p[i], pp[i]);
      hi[i] = std::max(p[i], pp[i]);
    }
    q.evaluate(lo, qlo);
    q.evaluate(hi, qhi);
    return !approx_equal(qlo, qp, opts.equality_tol) || !approx_equal(qhi, qpp, opts.equality_tol);
  });
}

}  // namespace zmeq
