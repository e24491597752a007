#include "expts/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "expts/parallel.hpp"

namespace expts {

std::vector<std::uint64_t> checkpoint_grid(std::uint64_t horizon, double ratio) {
  if (!(ratio > 1.0)) throw std::invalid_argument("checkpoint ratio must exceed 1");
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  std::vector<std::uint64_t> grid;
  for (int k = 0;; ++k) {
    const double value = std::round(std::pow(ratio, k));
    if (value > static_cast<double>(horizon)) break;
    const auto t = static_cast<std::uint64_t>(value);
    if (t >= 1 && (grid.empty() || grid.back() != t)) grid.push_back(t);
  }
  if (horizon >= 1 && (grid.empty() || grid.back() != horizon)) grid.push_back(horizon);
  return grid;
}

RegretTrace run_episode(PolicyKind policy, const BanditInstance& instance,
                        std::uint64_t horizon, std::uint64_t seed, double checkpoint_ratio) {
  if (horizon < instance.num_arms()) {
    throw std::invalid_argument("horizon " + std::to_string(horizon) +
                                " is shorter than the number of arms");
  }
  check_compatible(policy, instance.model());
  const auto grid = checkpoint_grid(horizon, checkpoint_ratio);
  return run_episode_with(
      [&](const PolicyState& state, Rng& rng) { return select_arm(state, instance, rng); },
      policy, instance, horizon, seed, grid);
}

RegretSummary summarize(std::span<const RegretTrace> traces, double asymptotic_constant) {
  if (traces.empty()) throw std::invalid_argument("summarize: no replications");
  const std::size_t points = traces.front().checkpoints.size();
  RegretSummary summary;
  summary.asymptotic_constant = asymptotic_constant;
  summary.num_replications = traces.size();
  summary.t.resize(points);
  summary.mean_regret.assign(points, 0.0);
  summary.stderr_regret.assign(points, 0.0);

  const double n = static_cast<double>(traces.size());
  for (std::size_t j = 0; j < points; ++j) {
    summary.t[j] = traces.front().checkpoints[j].t;
    double sum = 0.0;
    for (const auto& trace : traces) {
      if (trace.checkpoints.size() != points || trace.checkpoints[j].t != summary.t[j]) {
        throw std::invalid_argument("summarize: traces have different checkpoint grids");
      }
      sum += trace.checkpoints[j].cumulative_regret;
    }
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& trace : traces) {
      const double d = trace.checkpoints[j].cumulative_regret - mean;
      sq += d * d;
    }
    summary.mean_regret[j] = mean;
    summary.stderr_regret[j] = traces.size() > 1 ? std::sqrt(sq / (n - 1.0)) / std::sqrt(n) : 0.0;
  }
  return summary;
}

RegretSummary run_monte_carlo(const EpisodeFn& episode, std::uint64_t replications,
                              std::uint64_t base_seed, unsigned workers,
                              double asymptotic_constant) {
  if (replications == 0) throw std::invalid_argument("replications must be at least 1");
  std::vector<RegretTrace> traces(replications);
  parallel_for(replications, workers,
               [&](std::size_t r) { traces[r] = episode(mix_seed(base_seed, r)); });
  return summarize(traces, asymptotic_constant);
}

RegretSummary run_monte_carlo(const MonteCarloConfig& config) {
  if (config.horizon < config.instance.num_arms()) {
    throw std::invalid_argument("horizon is shorter than the number of arms");
  }
  check_compatible(config.policy, config.instance.model());
  return run_monte_carlo(
      [&](std::uint64_t seed) {
        return run_episode(config.policy, config.instance, config.horizon, seed,
                           config.checkpoint_ratio);
      },
      config.replications, config.base_seed, config.workers,
      config.instance.asymptotic_constant());
}

std::vector<RatioPoint> asymptotic_ratio(const RegretSummary& summary,
                                         const BanditInstance& instance) {
  const double constant = instance.asymptotic_constant();
  std::vector<RatioPoint> rows;
  for (std::size_t j = 0; j < summary.t.size(); ++j) {
    if (summary.t[j] < 3) continue;
    rows.push_back({summary.t[j],
                    summary.mean_regret[j] / std::log(static_cast<double>(summary.t[j])),
                    constant});
  }
  return rows;
}

}  // namespace expts
