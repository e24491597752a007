#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "expts/config.hpp"
#include "expts/simulator.hpp"

namespace expts {

inline constexpr const char* kVersion = "1.0.0";
// Environment variable that overrides ExperimentConfig::output_path.
inline constexpr const char* kOutputDirEnv = "EXPTS_OUTPUT_DIR";

// "%.17g"; non-finite values print as nan / inf / -inf.
std::string format_real(double value);

// Columns: t,mean_regret,stderr,regret_over_log_t,asymptotic_constant.
// regret_over_log_t is nan for t < 3.
void write_summary_csv(std::ostream& out, const RegretSummary& summary);

// File name used for a policy's CSV ("expts+" -> "expts_plus.csv").
std::string policy_csv_name(PolicyKind kind);

struct RunOptions {
  unsigned workers = 0;
  std::optional<std::filesystem::path> output_dir;  // overrides config.output_path
};

struct RunResult {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> csv_files;
  std::filesystem::path manifest;
  std::filesystem::path plot_script;
  std::vector<RegretSummary> summaries;  // same order as config.policies
};

// Runs every configured policy and writes one CSV per policy, manifest.json
// and a plotting script. On failure the files written so far are removed and
// the error is rethrown (I/O errors as std::runtime_error naming the path).
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace expts
