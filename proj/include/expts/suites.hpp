#pragma once

// Verification suites behind the CLI subcommands sampler-dump, verify-tails,
// verify-maximal and sweep-minimax.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "expts/concentration.hpp"
#include "expts/exp_family.hpp"
#include "expts/policies.hpp"
#include "expts/sampler.hpp"

namespace expts {

// ---- sampler-dump ----------------------------------------------------------

struct DumpRow {
  double x;
  double pdf;
  double cdf;
};

// Evenly spaced x between the 1e-4 and 1 - 1e-4 quantiles (clipped to the
// support), with x = mu always present.
std::vector<DumpRow> sampler_dump(const ExpFamilyModel& model, const SamplerParams& params,
                                  std::size_t points);
void write_dump_csv(std::ostream& out, std::span<const DumpRow> rows);

// ---- verify-tails ----------------------------------------------------------

// Two-sided Kolmogorov-Smirnov distance between sorted samples and a CDF.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);
// Asymptotic critical value sqrt(-ln(alpha / 2) / 2) / sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

struct SamplerCase {
  ExpFamilyModel model = ExpFamilyModel::bernoulli();
  double mu = 0.5;
  std::uint64_t n = 1;
};

std::vector<SamplerCase> default_sampler_cases();

struct TailCheck {
  double z;
  double expected;   // tail_probability(z)
  double empirical;  // fraction of draws >= z
  double sigma;
  bool pass;         // |empirical - expected| <= 3 sigma
};

struct SamplerCaseReport {
  SamplerCase sampler_case;
  std::size_t draws = 0;
  double ks = 0.0;
  double ks_critical = 0.0;
  std::vector<TailCheck> tails;

  bool ks_pass() const { return ks < ks_critical; }
  bool pass() const;
};

inline constexpr double kKsAlpha = 0.001;

SamplerCaseReport check_sampler_case(const SamplerCase& sampler_case, std::size_t draws,
                                     std::uint64_t seed);
std::vector<SamplerCaseReport> verify_tails(std::span<const SamplerCase> cases,
                                            std::size_t draws, std::uint64_t seed,
                                            unsigned workers = 0);

// ---- verify-maximal --------------------------------------------------------

struct MaximalCase {
  ExpFamilyModel model;
  double mu;
  double x;
  std::uint64_t first_n;
  std::uint64_t last_n;
};

std::vector<MaximalCase> default_maximal_cases();
std::vector<MaximalInequalityResult> verify_maximal(std::span<const MaximalCase> cases,
                                                    std::uint64_t replications,
                                                    std::uint64_t seed, unsigned workers = 0);

// ---- sweep-minimax ---------------------------------------------------------

struct SweepPoint {
  std::uint64_t arms;
  std::uint64_t horizon;
  double gap;  // sqrt(V K / T)
  double mean_regret;
  double stderr_regret;
  double sqrt_vkt;
};

struct SweepSlope {
  std::uint64_t arms;
  double slope;  // least-squares slope of log regret against log T
};

struct SweepResult {
  PolicyKind policy;
  double variance;
  std::vector<SweepPoint> points;
  std::vector<SweepSlope> slopes;
};

inline constexpr double kSweepSlopeLow = 0.40;
inline constexpr double kSweepSlopeHigh = 0.62;

// Gaussian(variance) instances with one arm at 0 and K - 1 arms at
// -sqrt(V K / T), one per (K, T) pair.
SweepResult sweep_minimax(PolicyKind policy, std::span<const std::uint64_t> horizons,
                          std::span<const std::uint64_t> arm_counts,
                          std::uint64_t replications, std::uint64_t seed,
                          unsigned workers = 0, double variance = 1.0);

double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace expts
