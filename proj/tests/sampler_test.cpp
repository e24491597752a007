#include "expts/sampler.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "expts/suites.hpp"
#include "quadrature.hpp"

namespace expts {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bernoulli_kl_by_quadrature(double mu, double x) {
  return testing::adaptive_simpson([&](double v) { return (v - mu) / (v * (1.0 - v)); }, mu, x,
                                   1e-12);
}

// PDF written out directly from the density formula, independent of cdf().
double density(const ExpFamilyModel& model, const SamplerParams& p, double x) {
  if (!model.support().contains(x)) return 0.0;
  const double rate = p.rate();
  const double weight = std::exp(-rate * kl_divergence(model, p.mu, x));
  if (weight == 0.0) return 0.0;
  return rate * std::abs(x - p.mu) / (2.0 * variance_at(model, x)) * weight;
}

TEST(BCoeff, Formula) {
  EXPECT_EQ(b_coeff(1), 0.0);
  EXPECT_EQ(b_coeff(2), 0.5);
  EXPECT_DOUBLE_EQ(b_coeff(1000), 0.999);
  for (std::uint64_t n = 2; n < 200; ++n) EXPECT_GE(b_coeff(n), 0.5);
  EXPECT_THROW(SamplerParams::make(0.5, 0), std::invalid_argument);
  EXPECT_EQ(SamplerParams::with_coefficient(0.5, 4, 0.25).rate(), 1.0);
  EXPECT_THROW(SamplerParams::with_coefficient(0.5, 4, -0.1), std::invalid_argument);
}

TEST(TailProbability, Examples) {
  const auto bern = ExpFamilyModel::bernoulli();
  for (const auto& model : {bern, ExpFamilyModel::gaussian(1.0), ExpFamilyModel::poisson()}) {
    EXPECT_EQ(tail_probability(model, SamplerParams::make(0.5, 7), 0.5), 0.5);
  }
  // n = 2 gives n b_n = 1.
  const double kl = bernoulli_kl_by_quadrature(0.5, 0.75);
  EXPECT_NEAR(kl, 0.5 * std::log(2.0 / 3.0) + 0.5 * std::log(2.0), 1e-12);
  const double expected = 0.5 * std::exp(-kl);
  EXPECT_NEAR(tail_probability(bern, SamplerParams::make(0.5, 2), 0.75), expected, 1e-12);
  EXPECT_NEAR(expected, 0.4330, 1e-4);

  for (std::uint64_t n : {1, 2, 10, 1000}) {
    EXPECT_EQ(tail_probability(bern, SamplerParams::make(0.5, n), 1.0), 0.0) << n;
    EXPECT_EQ(tail_probability(bern, SamplerParams::make(0.5, n), 0.0), 1.0) << n;
  }
  EXPECT_THROW(tail_probability(bern, SamplerParams::make(0.5, 2), 1.1), std::domain_error);
}

TEST(TailProbability, LowerBranchIsComplement) {
  const auto model = ExpFamilyModel::gamma(3.0);
  const auto p = SamplerParams::make(2.0, 9);
  for (double z : {0.1, 0.7, 1.5, 1.99}) {
    const double lower_tail = 0.5 * std::exp(-p.rate() * kl_divergence(model, 2.0, z));
    EXPECT_NEAR(tail_probability(model, p, z), 1.0 - lower_tail, 1e-15);
  }
}

TEST(Cdf, Examples) {
  const auto gauss = ExpFamilyModel::gaussian(1.0);
  const auto p = SamplerParams::make(0.0, 2);
  EXPECT_EQ(cdf(gauss, p, 0.0), 0.5);
  EXPECT_NEAR(cdf(gauss, p, 2.0), 1.0 - 0.5 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(cdf(gauss, p, 2.0), 0.93233, 1e-5);
  EXPECT_EQ(cdf(gauss, p, kInf), 1.0);
  EXPECT_EQ(cdf(gauss, p, -kInf), 0.0);
  EXPECT_EQ(cdf(ExpFamilyModel::bernoulli(), SamplerParams::make(0.3, 4), 1.0), 1.0);
}

TEST(Cdf, MonotoneAndContinuousAtMean) {
  const std::vector<std::pair<ExpFamilyModel, double>> cases = {
      {ExpFamilyModel::bernoulli(), 0.3},
      {ExpFamilyModel::exponential(), 1.5},
      {ExpFamilyModel::poisson(), 4.0},
  };
  for (const auto& [model, mu] : cases) {
    const auto p = SamplerParams::make(mu, 6);
    double previous = 0.0;
    for (int i = 1; i < 400; ++i) {
      const double x = model.support().bounded_above() ? i / 400.0 : i * mu / 100.0;
      const double f = cdf(model, p, x);
      ASSERT_GE(f, previous) << model.tag() << " " << x;
      previous = f;
    }
    EXPECT_NEAR(cdf(model, p, mu * (1 - 1e-9)), 0.5, 1e-6);
    EXPECT_NEAR(cdf(model, p, mu * (1 + 1e-9)), 0.5, 1e-6);
  }
}

TEST(InvertKl, ZeroLevelReturnsMean) {
  for (const auto& model : {ExpFamilyModel::bernoulli(), ExpFamilyModel::gaussian(2.0),
                            ExpFamilyModel::exponential(), ExpFamilyModel::poisson()}) {
    EXPECT_EQ(invert_kl(model, 0.4, 0.0, KlSide::kUpper).value, 0.4);
    EXPECT_EQ(invert_kl(model, 0.4, 0.0, KlSide::kLower).value, 0.4);
  }
}

TEST(InvertKl, Examples) {
  const auto gauss = ExpFamilyModel::gaussian(1.0);
  EXPECT_DOUBLE_EQ(invert_kl(gauss, 0.0, 0.5, KlSide::kUpper).value, 1.0);
  EXPECT_DOUBLE_EQ(invert_kl(gauss, 0.0, 0.5, KlSide::kLower).value, -1.0);

  const auto bern = ExpFamilyModel::bernoulli();
  const double c = bernoulli_kl_by_quadrature(0.5, 0.75);
  for (auto method : {RootMethod::kHybrid, RootMethod::kBisection}) {
    const auto root = invert_kl(bern, 0.5, c, KlSide::kUpper, method);
    EXPECT_FALSE(root.saturated);
    EXPECT_NEAR(root.value, 0.75, 1e-10);
    EXPECT_NEAR(kl_divergence(bern, 0.5, root.value), c, 1e-10);
    EXPECT_NEAR(invert_kl(bern, 0.5, c, KlSide::kLower, method).value, 0.25, 1e-10);
  }
  EXPECT_NEAR(invert_kl(bern, 0.5, 0.14384, KlSide::kUpper).value, 0.75, 1e-4);
}

TEST(InvertKl, SaturatesAtBoundedSupport) {
  const auto bern = ExpFamilyModel::bernoulli();
  const auto root = invert_kl(bern, 0.5, 100.0, KlSide::kUpper);
  EXPECT_TRUE(root.saturated);
  EXPECT_EQ(root.value, 1.0 - bern.boundary_margin());
  EXPECT_LT(root.value, 1.0);
  const auto low = invert_kl(bern, 0.5, 100.0, KlSide::kLower);
  EXPECT_TRUE(low.saturated);
  EXPECT_EQ(low.value, bern.boundary_margin());
}

TEST(InvertKl, RejectsBadArguments) {
  const auto bern = ExpFamilyModel::bernoulli();
  EXPECT_THROW(invert_kl(bern, 0.5, -1.0, KlSide::kUpper), std::domain_error);
  EXPECT_THROW(invert_kl(bern, 1.0, 1.0, KlSide::kUpper), std::domain_error);
}

// |kl(mu, root) - c| <= 1e-10 max(1, c), or, where kl is too steep for that
// to be representable, c lies between kl at the doubles two ulps either side.
bool solves_level(const ExpFamilyModel& model, double mu, double c, double root) {
  if (std::abs(kl_divergence(model, mu, root) - c) <= 1e-10 * std::max(1.0, c)) return true;
  const auto s = model.support();
  const double below = std::nextafter(std::nextafter(root, -kInf), -kInf);
  const double above = std::nextafter(std::nextafter(root, kInf), kInf);
  if (!s.contains(below) || !s.contains(above)) return false;
  const double a = kl_divergence(model, mu, below);
  const double b = kl_divergence(model, mu, above);
  return std::min(a, b) <= c && c <= std::max(a, b);
}

// Round trip kl(mu, invert_kl(mu, c)) = c over a log grid of levels, for both
// solver paths; the two paths must also agree with each other.
TEST(InvertKl, RoundTripOnLogGrid) {
  const std::vector<std::pair<ExpFamilyModel, std::vector<double>>> cases = {
      {ExpFamilyModel::bernoulli(), {0.01, 0.3, 0.5, 0.77, 0.99}},
      {ExpFamilyModel::gaussian(0.5), {-2.0, 0.0, 3.0}},
      {ExpFamilyModel::exponential(), {0.05, 1.0, 20.0}},
      {ExpFamilyModel::gamma(0.7), {0.2, 4.0}},
      {ExpFamilyModel::gamma(5.0), {1.0}},
      {ExpFamilyModel::poisson(), {0.1, 2.0, 50.0}},
  };
  int checked = 0;
  for (const auto& [model, mus] : cases) {
    for (double mu : mus) {
      for (double log_c = -12.0; log_c <= 1.5; log_c += 0.25) {
        const double c = std::pow(10.0, log_c);
        for (auto side : {KlSide::kUpper, KlSide::kLower}) {
          const auto hybrid = invert_kl(model, mu, c, side, RootMethod::kHybrid);
          const auto bisect = invert_kl(model, mu, c, side, RootMethod::kBisection);
          ASSERT_EQ(hybrid.saturated, bisect.saturated);
          if (hybrid.saturated) continue;
          if (side == KlSide::kUpper) {
            ASSERT_GE(hybrid.value, mu);
          } else {
            ASSERT_LE(hybrid.value, mu);
          }
          ASSERT_TRUE(solves_level(model, mu, c, hybrid.value))
              << model.tag() << " mu=" << mu << " c=" << c << " root=" << hybrid.value;
          ASSERT_TRUE(solves_level(model, mu, c, bisect.value))
              << model.tag() << " mu=" << mu << " c=" << c << " root=" << bisect.value;
          ASSERT_NEAR(hybrid.value, bisect.value, 1e-9 * std::max(1.0, std::abs(hybrid.value)));
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(SampleAt, Examples) {
  const auto gauss = ExpFamilyModel::gaussian(1.0);
  EXPECT_EQ(sample_at(gauss, SamplerParams::make(0.3, 5), 0.5), 0.3);
  const double y = 1.0 - 0.5 * std::exp(-1.0);
  EXPECT_NEAR(y, 0.81606, 1e-5);
  EXPECT_NEAR(sample_at(gauss, SamplerParams::make(0.0, 2), y), std::numbers::sqrt2, 1e-12);

  const auto bern = ExpFamilyModel::bernoulli();
  EXPECT_EQ(sample_at(bern, SamplerParams::make(0.4, 1), 0.9), kInf);
  EXPECT_EQ(sample_at(bern, SamplerParams::make(0.4, 1), 0.1), -kInf);
  EXPECT_TRUE(is_sentinel(sample_at(gauss, SamplerParams::make(0.0, 1), 0.6)));
  EXPECT_THROW(sample_at(bern, SamplerParams::make(0.4, 2), 0.0), std::domain_error);
  EXPECT_THROW(sample_at(bern, SamplerParams::make(0.4, 2), 1.0), std::domain_error);
}

TEST(SampleAt, InvertsCdf) {
  const std::vector<std::pair<ExpFamilyModel, double>> cases = {
      {ExpFamilyModel::bernoulli(), 0.35},
      {ExpFamilyModel::gaussian(2.0), -1.0},
      {ExpFamilyModel::exponential(), 2.0},
      {ExpFamilyModel::gamma(1.5), 0.8},
      {ExpFamilyModel::poisson(), 6.0},
  };
  for (const auto& [model, mu] : cases) {
    for (std::uint64_t n : {2, 5, 40}) {
      const auto p = SamplerParams::make(mu, n);
      for (double y : {0.001, 0.05, 0.3, 0.49, 0.51, 0.8, 0.97, 0.9995}) {
        const double theta = sample_at(model, p, y);
        ASSERT_TRUE(model.support().contains(theta));
        ASSERT_NEAR(cdf(model, p, theta), y, 1e-9) << model.tag() << " n=" << n << " y=" << y;
      }
    }
  }
}

TEST(SampleAt, FiniteDrawsStayInsideSupport) {
  const auto bern = ExpFamilyModel::bernoulli();
  const auto p = SamplerParams::make(0.999, 2);
  const double top = sample_at(bern, p, 1.0 - 1e-15);
  EXPECT_LT(top, 1.0);
  EXPECT_GE(top, 1.0 - bern.boundary_margin());
  const double bottom = sample_at(ExpFamilyModel::poisson(), SamplerParams::make(0.5, 2), 1e-300);
  EXPECT_GT(bottom, 0.0);
}

TEST(SamplePlus, GreedyBranch) {
  const auto model = ExpFamilyModel::gaussian(1.0);
  const auto p = SamplerParams::make(0.7, 3);
  // K = 1: greedy probability is 0, always delegate.
  EXPECT_EQ(sample_plus_at(model, p, 1, 1e-12, 0.9), sample_at(model, p, 0.9));
  EXPECT_EQ(sample_plus_at(model, p, 2, 0.2, 0.9), 0.7);
  EXPECT_EQ(sample_plus_at(model, p, 2, 0.6, 0.9), sample_at(model, p, 0.9));
  EXPECT_THROW(sample_plus_at(model, p, 0, 0.5, 0.5), std::invalid_argument);
}

TEST(SamplePlus, GreedyFrequency) {
  const auto model = ExpFamilyModel::bernoulli();
  const auto p = SamplerParams::make(0.4, 10);
  Rng rng(99);
  constexpr int kCalls = 100000;
  int greedy = 0;
  for (int i = 0; i < kCalls; ++i) greedy += sample_plus(model, p, 10, rng) == 0.4 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(greedy) / kCalls, 0.9, 0.005);
}

// Empirical CDF of P+ equals (1 - 1/K) step(mu) + (1/K) cdf within 3 sigma.
TEST(SamplePlus, MixtureLaw) {
  const auto model = ExpFamilyModel::poisson();
  const auto p = SamplerParams::make(2.0, 8);
  constexpr std::uint64_t kArms = 5;
  constexpr int kDraws = 100000;
  Rng rng(1234);
  std::vector<double> draws(kDraws);
  for (auto& d : draws) d = sample_plus(model, p, kArms, rng);
  std::sort(draws.begin(), draws.end());
  const double w = 1.0 / kArms;
  for (double x : {0.5, 1.0, 1.7, 1.99, 2.0, 2.3, 3.0, 4.5}) {
    const double step = x >= 2.0 ? 1.0 : 0.0;
    const double expected = (1.0 - w) * step + w * cdf(model, p, x);
    const double empirical =
        static_cast<double>(std::upper_bound(draws.begin(), draws.end(), x) - draws.begin()) /
        kDraws;
    const double sigma = std::sqrt(expected * (1.0 - expected) / kDraws);
    EXPECT_LE(std::abs(empirical - expected), 3.0 * sigma + 1e-12) << "x=" << x;
  }
}

TEST(Pdf, IntegratesToCdf) {
  const std::vector<std::pair<ExpFamilyModel, double>> cases = {
      {ExpFamilyModel::bernoulli(), 0.3},  {ExpFamilyModel::gaussian(1.0), 0.5},
      {ExpFamilyModel::exponential(), 1.0}, {ExpFamilyModel::gamma(2.0), 3.0},
      {ExpFamilyModel::poisson(), 0.4},
  };
  for (const auto& [model, mu] : cases) {
    for (std::uint64_t n : {2, 3, 25}) {
      const auto p = SamplerParams::make(mu, n);
      const auto s = model.support();
      auto f = [&](double x) { return density(model, p, x); };
      const double lower_half = testing::integrate_density(f, s.lower, mu);
      const double upper_half = testing::integrate_density(f, mu, s.upper);
      EXPECT_NEAR(lower_half + upper_half, 1.0, 1e-6) << model.tag() << " n=" << n;
      for (double q : {0.05, 0.3, 0.7, 0.95}) {
        const double x = sample_at(model, p, q);
        const double mass = x <= mu ? testing::integrate_density(f, s.lower, x)
                                    : lower_half + testing::integrate_density(f, mu, x);
        EXPECT_NEAR(mass, cdf(model, p, x), 1e-6) << model.tag() << " n=" << n << " x=" << x;
        EXPECT_NEAR(pdf(model, p, x), density(model, p, x), 1e-14 * (1.0 + density(model, p, x)));
      }
    }
  }
}

TEST(Sample, KolmogorovSmirnovSmallRun) {
  const auto model = ExpFamilyModel::gamma(2.0);
  const auto p = SamplerParams::make(1.5, 4);
  Rng rng(8);
  std::vector<double> draws(20000);
  for (auto& d : draws) d = sample(model, p, rng);
  std::sort(draws.begin(), draws.end());
  const double d = ks_statistic(draws, [&](double x) { return cdf(model, p, x); });
  EXPECT_LT(d, ks_critical_value(draws.size(), 0.001));
}

TEST(Sample, DeterministicPerSeed) {
  const auto model = ExpFamilyModel::exponential();
  const auto p = SamplerParams::make(1.0, 5);
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(sample(model, p, a), sample(model, p, b));
}

TEST(Sample, SingleObservationGivesSentinelsEvenly) {
  const auto model = ExpFamilyModel::bernoulli();
  const auto p = SamplerParams::make(0.5, 1);
  Rng rng(3);
  int up = 0;
  constexpr int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) {
    const double theta = sample(model, p, rng);
    ASSERT_TRUE(is_sentinel(theta));
    up += theta > 0 ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(up) / kDraws, 0.5, 3.0 * std::sqrt(0.25 / kDraws));
}

}  // namespace
}  // namespace expts
