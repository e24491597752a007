#include "expts/policies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "expts/sampler.hpp"

namespace expts {
namespace {

struct PolicyName {
  PolicyKind kind;
  std::string_view tag;
};

constexpr std::array<PolicyName, 9> kPolicyNames{{
    {PolicyKind::kExpTS, "expts"},
    {PolicyKind::kExpTSPlus, "expts+"},
    {PolicyKind::kGaussianTS, "gaussian-ts"},
    {PolicyKind::kGaussianTSPlus, "gaussian-ts+"},
    {PolicyKind::kBernoulliTS, "bernoulli-ts"},
    {PolicyKind::kBernoulliTSPlus, "bernoulli-ts+"},
    {PolicyKind::kUCB1, "ucb1"},
    {PolicyKind::kMOSS, "moss"},
    {PolicyKind::kKLUCB, "kl-ucb"},
}};

constexpr std::array<PolicyKind, 9> kAllPolicies{
    PolicyKind::kExpTS,       PolicyKind::kExpTSPlus,       PolicyKind::kGaussianTS,
    PolicyKind::kGaussianTSPlus, PolicyKind::kBernoulliTS, PolicyKind::kBernoulliTSPlus,
    PolicyKind::kUCB1,        PolicyKind::kMOSS,            PolicyKind::kKLUCB,
};

double greedy_probability(std::size_t num_arms) {
  return 1.0 - 1.0 / static_cast<double>(num_arms);
}

double index_for_arm(const PolicyState& state, PolicyKind kind, const BanditInstance& instance,
                     double t, std::size_t arm) {
  const double mean = state.empirical_means[arm];
  const double pulls = static_cast<double>(state.pull_counts[arm]);
  const double cap = instance.variance_cap();
  switch (kind) {
    case PolicyKind::kUCB1:
      return mean + std::sqrt(2.0 * cap * std::log(t) / pulls);
    case PolicyKind::kMOSS: {
      const double k = static_cast<double>(state.num_arms());
      const double log_plus = std::max(0.0, std::log(t / (k * pulls)));
      return mean + std::sqrt(log_plus * cap * 2.0 / pulls);
    }
    case PolicyKind::kKLUCB: {
      const double level = std::log(t) + 3.0 * std::log(std::log(std::max(t, std::numbers::e)));
      const auto& model = instance.model();
      return invert_kl(model, model.clamp_to_interior(mean), level / pulls, KlSide::kUpper).value;
    }
    default:
      throw std::invalid_argument("baseline_index: not an index policy");
  }
}

double draw_for_arm(const PolicyState& state, const BanditInstance& instance, std::size_t arm,
                    Rng& rng) {
  const auto& model = instance.model();
  const double mean = state.empirical_means[arm];
  const std::uint64_t pulls = state.pull_counts[arm];
  const std::size_t k = state.num_arms();
  switch (state.kind) {
    case PolicyKind::kExpTS:
      return sample(model, SamplerParams::make(model.clamp_to_interior(mean), pulls), rng);
    case PolicyKind::kExpTSPlus:
      return sample_plus(model, SamplerParams::make(model.clamp_to_interior(mean), pulls), k,
                         rng);
    case PolicyKind::kGaussianTSPlus:
      if (rng.uniform_open() < greedy_probability(k)) return mean;
      [[fallthrough]];
    case PolicyKind::kGaussianTS:
      return mean +
             std::sqrt(instance.variance_cap() / static_cast<double>(pulls)) * rng.normal();
    case PolicyKind::kBernoulliTSPlus:
      if (rng.uniform_open() < greedy_probability(k)) return mean;
      [[fallthrough]];
    case PolicyKind::kBernoulliTS: {
      const double successes = static_cast<double>(state.success_counts[arm]);
      return rng.beta(successes + 1.0, static_cast<double>(pulls) - successes + 1.0);
    }
    default:
      break;
  }
  return index_for_arm(state, state.kind, instance, static_cast<double>(state.step + 1), arm);
}

}  // namespace

std::string_view policy_tag(PolicyKind kind) {
  for (const auto& entry : kPolicyNames) {
    if (entry.kind == kind) return entry.tag;
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view tag) {
  for (const auto& entry : kPolicyNames) {
    if (entry.tag == tag) return entry.kind;
  }
  return std::nullopt;
}

std::span<const PolicyKind> all_policies() { return kAllPolicies; }

std::string valid_policy_tags() {
  std::string out;
  for (const auto& entry : kPolicyNames) {
    if (!out.empty()) out += ", ";
    out += entry.tag;
  }
  return out;
}

bool is_bernoulli_policy(PolicyKind kind) {
  return kind == PolicyKind::kBernoulliTS || kind == PolicyKind::kBernoulliTSPlus;
}

bool is_index_policy(PolicyKind kind) {
  return kind == PolicyKind::kUCB1 || kind == PolicyKind::kMOSS || kind == PolicyKind::kKLUCB;
}

void check_compatible(PolicyKind kind, const ExpFamilyModel& model) {
  if (is_bernoulli_policy(kind) && model.kind() != FamilyKind::kBernoulli) {
    throw std::invalid_argument(std::string(policy_tag(kind)) +
                                " requires Bernoulli rewards, but the instance family is " +
                                model.tag());
  }
}

PolicyState PolicyState::initial(PolicyKind kind, std::size_t num_arms) {
  PolicyState state{kind, std::vector<std::uint64_t>(num_arms, 0),
                    std::vector<double>(num_arms, 0.0), {}, 0};
  if (is_bernoulli_policy(kind)) state.success_counts.assign(num_arms, 0);
  return state;
}

bool PolicyState::warm_start_done() const {
  return std::none_of(pull_counts.begin(), pull_counts.end(),
                      [](std::uint64_t n) { return n == 0; });
}

void PolicyState::validate() const {
  const std::size_t k = pull_counts.size();
  if (k == 0) throw std::logic_error("policy state has no arms");
  if (empirical_means.size() != k) {
    throw std::logic_error("policy state: empirical_means size differs from pull_counts");
  }
  if (is_bernoulli_policy(kind)) {
    if (success_counts.size() != k) {
      throw std::logic_error("policy state: success_counts size differs from pull_counts");
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (success_counts[i] > pull_counts[i]) {
        throw std::logic_error("policy state: more successes than pulls on an arm");
      }
    }
  }
  const auto total = std::accumulate(pull_counts.begin(), pull_counts.end(), std::uint64_t{0});
  if (total != step) throw std::logic_error("policy state: pull counts do not sum to step");
}

std::size_t select_arm(const PolicyState& state, const BanditInstance& instance, Rng& rng) {
  state.validate();
  if (state.num_arms() != instance.num_arms()) {
    throw std::logic_error("policy state and instance disagree on the number of arms");
  }
  for (std::size_t i = 0; i < state.num_arms(); ++i) {
    if (state.pull_counts[i] == 0) return i;
  }
  ArgmaxTracker tracker;
  for (std::size_t i = 0; i < state.num_arms(); ++i) {
    tracker.offer(i, draw_for_arm(state, instance, i, rng), rng);
  }
  return tracker.best();
}

void update(PolicyState& state, std::size_t arm, double reward) {
  if (arm >= state.num_arms()) throw std::out_of_range("update: arm index out of range");
  if (!std::isfinite(reward)) throw std::invalid_argument("update: reward must be finite");
  if (is_bernoulli_policy(state.kind) && reward != 0.0 && reward != 1.0) {
    throw std::invalid_argument(std::string(policy_tag(state.kind)) +
                                " received a reward outside {0, 1}");
  }
  const double pulls = static_cast<double>(state.pull_counts[arm]);
  state.empirical_means[arm] = (pulls * state.empirical_means[arm] + reward) / (pulls + 1.0);
  state.pull_counts[arm] += 1;
  if (is_bernoulli_policy(state.kind)) state.success_counts[arm] += reward == 1.0 ? 1 : 0;
  state.step += 1;
}

std::vector<double> baseline_index(const PolicyState& state, PolicyKind kind,
                                   const BanditInstance& instance, double t) {
  if (!is_index_policy(kind)) throw std::invalid_argument("baseline_index: not an index policy");
  if (!state.warm_start_done()) {
    throw std::logic_error("baseline_index: every arm must be pulled at least once");
  }
  std::vector<double> out(state.num_arms());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = index_for_arm(state, kind, instance, t, i);
  return out;
}

void ArgmaxTracker::offer(std::size_t index, double value, Rng& rng) {
  if (ties_ == 0 || value > best_value_) {
    best_ = index;
    best_value_ = value;
    ties_ = 1;
  } else if (value == best_value_) {
    ++ties_;
    if (rng.uniform_open() * static_cast<double>(ties_) < 1.0) best_ = index;
  }
}

std::size_t argmax_random_tie(std::span<const double> values, Rng& rng) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty range");
  ArgmaxTracker tracker;
  for (std::size_t i = 0; i < values.size(); ++i) tracker.offer(i, values[i], rng);
  return tracker.best();
}

}  // namespace expts
