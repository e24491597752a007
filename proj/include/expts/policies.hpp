#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expts/exp_family.hpp"
#include "expts/rng.hpp"

namespace expts {

enum class PolicyKind {
  kExpTS,
  kExpTSPlus,
  kGaussianTS,
  kGaussianTSPlus,
  kBernoulliTS,
  kBernoulliTSPlus,
  kUCB1,
  kMOSS,
  kKLUCB,
};

// Config tags: "expts", "expts+", "gaussian-ts", "gaussian-ts+", "bernoulli-ts",
// "bernoulli-ts+", "ucb1", "moss", "kl-ucb".
std::string_view policy_tag(PolicyKind kind);
std::optional<PolicyKind> parse_policy(std::string_view tag);
std::span<const PolicyKind> all_policies();
std::string valid_policy_tags();  // comma-separated, for error messages

bool is_bernoulli_policy(PolicyKind kind);
bool is_index_policy(PolicyKind kind);

// Throws std::invalid_argument if the policy cannot run on this family
// (Beta-posterior policies need Bernoulli rewards).
void check_compatible(PolicyKind kind, const ExpFamilyModel& model);

struct PolicyState {
  PolicyKind kind;
  std::vector<std::uint64_t> pull_counts;
  std::vector<double> empirical_means;
  std::vector<std::uint64_t> success_counts;  // Bernoulli-TS variants only
  std::uint64_t step = 0;

  static PolicyState initial(PolicyKind kind, std::size_t num_arms);

  std::size_t num_arms() const { return pull_counts.size(); }
  bool warm_start_done() const;

  // Throws std::logic_error when the fields disagree with each other.
  void validate() const;
};

// Picks the lowest-indexed unpulled arm during warm start, otherwise the
// argmax of the policy's per-arm draw or index (ties broken uniformly).
std::size_t select_arm(const PolicyState& state, const BanditInstance& instance, Rng& rng);

// Records reward for arm using mu <- (T mu + r) / (T + 1).
void update(PolicyState& state, std::size_t arm, double reward);

// UCB1 / MOSS / KL-UCB indices at round t; requires every arm pulled once.
std::vector<double> baseline_index(const PolicyState& state, PolicyKind kind,
                                   const BanditInstance& instance, double t);

// Argmax with uniform random tie-breaking (reservoir style, so the stream is
// only consumed when a tie occurs).
class ArgmaxTracker {
 public:
  void offer(std::size_t index, double value, Rng& rng);
  std::size_t best() const { return best_; }

 private:
  std::size_t best_ = 0;
  double best_value_ = 0.0;
  std::uint64_t ties_ = 0;
};

std::size_t argmax_random_tie(std::span<const double> values, Rng& rng);

}  // namespace expts
