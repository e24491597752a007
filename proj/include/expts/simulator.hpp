#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "expts/exp_family.hpp"
#include "expts/policies.hpp"
#include "expts/rng.hpp"

namespace expts {

// 10^(1/8): eight checkpoints per decade.
inline constexpr double kDefaultCheckpointRatio = 1.3335214321633240;

// Distinct values round(ratio^k) for k = 0, 1, ... that do not exceed the
// horizon, followed by the horizon itself.
std::vector<std::uint64_t> checkpoint_grid(std::uint64_t horizon,
                                           double ratio = kDefaultCheckpointRatio);

struct Checkpoint {
  std::uint64_t t;
  double cumulative_regret;  // sum of gaps of the arms played in rounds 1..t
};

struct RegretTrace {
  std::vector<Checkpoint> checkpoints;
  std::uint64_t seed = 0;
};

// Runs one episode with an arbitrary arm chooser
//   std::size_t choose(const PolicyState&, Rng&)
// and records pseudo-regret at the checkpoints. Only O(K + #checkpoints)
// memory is held regardless of the horizon.
template <class Chooser>
RegretTrace run_episode_with(Chooser&& choose, PolicyKind state_kind,
                             const BanditInstance& instance, std::uint64_t horizon,
                             std::uint64_t seed, std::span<const std::uint64_t> checkpoints) {
  Rng rng(seed);
  auto state = PolicyState::initial(state_kind, instance.num_arms());
  const auto gaps = instance.gaps();
  const auto means = instance.means();

  RegretTrace trace;
  trace.seed = seed;
  trace.checkpoints.reserve(checkpoints.size());
  double regret = 0.0;
  std::size_t next = 0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const std::size_t arm = choose(std::as_const(state), rng);
    update(state, arm, sample_reward(instance.model(), means[arm], rng));
    regret += gaps[arm];
    while (next < checkpoints.size() && checkpoints[next] == t) {
      trace.checkpoints.push_back({t, regret});
      ++next;
    }
  }
  return trace;
}

// Throws std::invalid_argument when horizon < K or the policy does not fit
// the family. Deterministic in (policy, instance, horizon, seed, ratio).
RegretTrace run_episode(PolicyKind policy, const BanditInstance& instance,
                        std::uint64_t horizon, std::uint64_t seed,
                        double checkpoint_ratio = kDefaultCheckpointRatio);

struct RegretSummary {
  std::vector<std::uint64_t> t;
  std::vector<double> mean_regret;
  std::vector<double> stderr_regret;  // sample std / sqrt(num_replications)
  double asymptotic_constant = 0.0;
  std::uint64_t num_replications = 0;
};

struct MonteCarloConfig {
  PolicyKind policy;
  BanditInstance instance;
  std::uint64_t horizon;
  std::uint64_t replications;
  std::uint64_t base_seed = 0;
  double checkpoint_ratio = kDefaultCheckpointRatio;
  unsigned workers = 0;  // 0: hardware concurrency
};

using EpisodeFn = std::function<RegretTrace(std::uint64_t seed)>;

// Replication r uses seed mix_seed(base_seed, r). The reduction runs in
// replication order, so the summary does not depend on the worker count.
RegretSummary run_monte_carlo(const MonteCarloConfig& config);
RegretSummary run_monte_carlo(const EpisodeFn& episode, std::uint64_t replications,
                              std::uint64_t base_seed, unsigned workers,
                              double asymptotic_constant);

RegretSummary summarize(std::span<const RegretTrace> traces, double asymptotic_constant);

struct RatioPoint {
  std::uint64_t t;
  double regret_over_log_t;
  double lower_bound_constant;
};

// Rows for checkpoints with t >= 3.
std::vector<RatioPoint> asymptotic_ratio(const RegretSummary& summary,
                                         const BanditInstance& instance);

}  // namespace expts
