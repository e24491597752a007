#pragma once

// Experiment configuration: a flat "key = value" document with dotted keys.
//
//   # comment
//   instance.family       = bernoulli          # required; see ExpFamilyModel::parse
//   instance.means        = 0.8, 0.5           # required
//   instance.variance_cap = 0.25               # default: max V over the means
//   policies              = expts, ucb1        # required
//   horizon               = 10000              # required, >= number of arms
//   replications          = 100                # default 100
//   base_seed             = 0                  # default 0
//   checkpoint_ratio      = 1.333521432163324  # default 10^(1/8)
//   output_path           = results            # default "results"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "expts/exp_family.hpp"
#include "expts/policies.hpp"

namespace expts {

struct ConfigIssue {
  std::size_t line;  // 1-based; 0 when the issue is not tied to one line
  std::string key;
  std::string message;
};

// Carries every problem found in a document, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

struct ExperimentConfig {
  ExpFamilyModel family = ExpFamilyModel::bernoulli();
  std::vector<double> means;
  double variance_cap = 0.0;
  std::vector<PolicyKind> policies;
  std::uint64_t horizon = 0;
  std::uint64_t replications = 100;
  std::uint64_t base_seed = 0;
  double checkpoint_ratio = 1.3335214321633240;
  std::filesystem::path output_path = "results";

  BanditInstance instance() const { return BanditInstance(family, means, variance_cap); }
};

// Throws ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace expts
