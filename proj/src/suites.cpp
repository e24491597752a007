#include "expts/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "expts/parallel.hpp"
#include "expts/report.hpp"
#include "expts/simulator.hpp"

namespace expts {

std::vector<DumpRow> sampler_dump(const ExpFamilyModel& model, const SamplerParams& params,
                                  std::size_t points) {
  if (points < 2) throw std::invalid_argument("sampler_dump: need at least 2 points");
  double lo = 0.0;
  double hi = 0.0;
  if (params.rate() > 0.0) {
    lo = sample_at(model, params, 1e-4);
    hi = sample_at(model, params, 1.0 - 1e-4);
  } else {
    lo = model.clamp_to_interior(params.mu - 1.0);
    hi = model.clamp_to_interior(params.mu + 1.0);
  }
  std::vector<double> xs;
  xs.reserve(points + 1);
  for (std::size_t i = 0; i < points; ++i) {
    xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  xs.back() = hi;
  if (std::find(xs.begin(), xs.end(), params.mu) == xs.end()) {
    xs.insert(std::upper_bound(xs.begin(), xs.end(), params.mu), params.mu);
  }
  std::vector<DumpRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) rows.push_back({x, pdf(model, params, x), cdf(model, params, x)});
  return rows;
}

void write_dump_csv(std::ostream& out, std::span<const DumpRow> rows) {
  out << "x,pdf,cdf\n";
  for (const auto& row : rows) {
    out << format_real(row.x) << ',' << format_real(row.pdf) << ',' << format_real(row.cdf)
        << '\n';
  }
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

std::vector<SamplerCase> default_sampler_cases() {
  const auto bern = ExpFamilyModel::bernoulli();
  const auto gauss = ExpFamilyModel::gaussian(1.0);
  const auto narrow = ExpFamilyModel::gaussian(0.25);
  const auto expo = ExpFamilyModel::exponential();
  const auto gam = ExpFamilyModel::gamma(2.5);
  const auto pois = ExpFamilyModel::poisson();
  return {
      {bern, 0.5, 2},   {bern, 0.2, 5},     {bern, 0.9, 30},  {bern, 0.05, 100},
      {gauss, 0.0, 2},  {gauss, 1.5, 50},   {narrow, -1.0, 10}, {expo, 1.0, 2},
      {expo, 3.0, 20},  {gam, 0.5, 3},      {gam, 2.0, 40},   {pois, 3.0, 2},
      {pois, 0.5, 10},  {pois, 10.0, 100},
  };
}

bool SamplerCaseReport::pass() const {
  return ks_pass() && std::all_of(tails.begin(), tails.end(),
                                  [](const TailCheck& t) { return t.pass; });
}

SamplerCaseReport check_sampler_case(const SamplerCase& sampler_case, std::size_t draws,
                                     std::uint64_t seed) {
  const auto& model = sampler_case.model;
  const auto params = SamplerParams::make(sampler_case.mu, sampler_case.n);
  Rng rng(seed);
  std::vector<double> samples(draws);
  for (auto& s : samples) s = sample(model, params, rng);
  std::sort(samples.begin(), samples.end());

  SamplerCaseReport report{sampler_case, draws, 0.0, ks_critical_value(draws, kKsAlpha), {}};
  report.ks = ks_statistic(samples, [&](double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return cdf(model, params, model.clamp_to_interior(x));
  });

  const double n = static_cast<double>(draws);
  for (double q : {0.02, 0.1, 0.3, 0.5, 0.7, 0.9, 0.98}) {
    const double z = sample_at(model, params, q);
    const double expected = tail_probability(model, params, z);
    const auto first_at_or_above = std::lower_bound(samples.begin(), samples.end(), z);
    const double empirical = static_cast<double>(samples.end() - first_at_or_above) / n;
    const double sigma = std::sqrt(expected * (1.0 - expected) / n);
    report.tails.push_back(
        {z, expected, empirical, sigma, std::abs(empirical - expected) <= 3.0 * sigma});
  }
  return report;
}

std::vector<SamplerCaseReport> verify_tails(std::span<const SamplerCase> cases,
                                            std::size_t draws, std::uint64_t seed,
                                            unsigned workers) {
  std::vector<SamplerCaseReport> reports(cases.size());
  parallel_for(cases.size(), workers, [&](std::size_t i) {
    reports[i] = check_sampler_case(cases[i], draws, mix_seed(seed, i));
  });
  return reports;
}

std::vector<MaximalCase> default_maximal_cases() {
  const auto bern = ExpFamilyModel::bernoulli();
  const auto gauss = ExpFamilyModel::gaussian(1.0);
  const auto narrow = ExpFamilyModel::gaussian(0.25);
  const auto expo = ExpFamilyModel::exponential();
  const auto gam = ExpFamilyModel::gamma(2.0);
  const auto pois = ExpFamilyModel::poisson();
  const double below = -std::numeric_limits<double>::infinity();
  return {
      {bern, 0.6, 0.4, 50, 200},  {bern, 0.6, 0.5, 1, 1},      {bern, 0.5, 0.3, 10, 100},
      {bern, 0.8, 0.6, 20, 200},  {bern, 0.3, 0.1, 5, 50},     {bern, 0.9, 0.7, 10, 100},
      {bern, 0.6, 0.5, 30, 200},  {bern, 0.5, 0.0, 3, 20},     {bern, 0.5, below, 1, 10},
      {gauss, 0.0, -0.5, 5, 100}, {gauss, 0.0, -1.0, 1, 50},   {gauss, 1.0, 0.7, 20, 200},
      {gauss, 0.0, -0.2, 10, 100}, {narrow, 0.5, 0.2, 5, 100}, {expo, 1.0, 0.5, 5, 100},
      {expo, 2.0, 1.2, 10, 100},  {expo, 1.0, 0.8, 30, 200},   {gam, 1.0, 0.6, 5, 100},
      {gam, 3.0, 2.0, 10, 100},   {pois, 3.0, 2.0, 5, 100},    {pois, 1.0, 0.5, 10, 100},
      {pois, 5.0, 4.0, 20, 200},  {pois, 0.5, 0.2, 5, 50},     {pois, 2.0, 0.0, 2, 20},
  };
}

std::vector<MaximalInequalityResult> verify_maximal(std::span<const MaximalCase> cases,
                                                    std::uint64_t replications,
                                                    std::uint64_t seed, unsigned workers) {
  std::vector<MaximalInequalityResult> results;
  results.reserve(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    results.push_back(verify_maximal_inequality(c.model, c.mu, c.x, c.first_n, c.last_n,
                                                replications, mix_seed(seed, i), workers));
  }
  return results;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_loglog_slope: need two or more matching points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

SweepResult sweep_minimax(PolicyKind policy, std::span<const std::uint64_t> horizons,
                          std::span<const std::uint64_t> arm_counts,
                          std::uint64_t replications, std::uint64_t seed, unsigned workers,
                          double variance) {
  SweepResult result{policy, variance, {}, {}};
  const auto model = ExpFamilyModel::gaussian(variance);
  std::uint64_t pair = 0;
  for (auto k : arm_counts) {
    if (k < 2) throw std::invalid_argument("sweep_minimax: need at least two arms");
    std::vector<double> ts;
    std::vector<double> regrets;
    for (auto horizon : horizons) {
      const double t = static_cast<double>(horizon);
      const double gap = std::sqrt(variance * static_cast<double>(k) / t);
      std::vector<double> means(k, -gap);
      means[0] = 0.0;
      MonteCarloConfig mc{policy,
                          BanditInstance(model, std::move(means), variance),
                          horizon,
                          replications,
                          mix_seed(seed, pair++),
                          t + 1.0,
                          workers};
      const auto summary = run_monte_carlo(mc);
      const double mean = summary.mean_regret.back();
      result.points.push_back({k, horizon, gap, mean, summary.stderr_regret.back(),
                               std::sqrt(variance * static_cast<double>(k) * t)});
      ts.push_back(t);
      regrets.push_back(mean);
    }
    if (ts.size() >= 2) result.slopes.push_back({k, fit_loglog_slope(ts, regrets)});
  }
  return result;
}

}  // namespace expts
