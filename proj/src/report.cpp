#include "expts/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "expts/parallel.hpp"

namespace expts {
namespace {

namespace fs = std::filesystem;

constexpr const char* kPlotScript = R"(#!/usr/bin/env python3
"""Plot mean pseudo-regret curves written by expts_cli.

Usage: python3 plot_regret.py [output_dir]
"""
import csv
import json
import pathlib
import sys

import matplotlib.pyplot as plt

root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent)
manifest = json.loads((root / "manifest.json").read_text())
fig, (ax_regret, ax_ratio) = plt.subplots(1, 2, figsize=(11, 4))
for entry in manifest["policies"]:
    rows = list(csv.DictReader(open(root / entry["csv"])))
    t = [int(r["t"]) for r in rows]
    mean = [float(r["mean_regret"]) for r in rows]
    err = [float(r["stderr"]) for r in rows]
    ax_regret.errorbar(t, mean, yerr=err, label=entry["policy"], capsize=2)
    ratio = [(int(r["t"]), float(r["regret_over_log_t"])) for r in rows if int(r["t"]) >= 3]
    ax_ratio.plot([p[0] for p in ratio], [p[1] for p in ratio], label=entry["policy"])
constant = manifest["policies"][0]["asymptotic_constant"] if manifest["policies"] else 0
ax_ratio.axhline(constant, color="k", linestyle="--", label="lower-bound constant")
for ax in (ax_regret, ax_ratio):
    ax.set_xscale("log")
    ax.set_xlabel("t")
    ax.legend()
ax_regret.set_ylabel("mean pseudo-regret")
ax_ratio.set_ylabel("regret / log t")
fig.tight_layout()
fig.savefig(root / "regret.png", dpi=150)
)";

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

nlohmann::json config_echo(const ExperimentConfig& config, const fs::path& output_dir) {
  nlohmann::json policies = nlohmann::json::array();
  for (auto kind : config.policies) policies.push_back(std::string(policy_tag(kind)));
  return {
      {"instance",
       {{"family", config.family.tag()},
        {"means", config.means},
        {"variance_cap", config.variance_cap}}},
      {"policies", policies},
      {"horizon", config.horizon},
      {"replications", config.replications},
      {"base_seed", config.base_seed},
      {"checkpoint_ratio", config.checkpoint_ratio},
      {"output_path", output_dir.string()},
  };
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_summary_csv(std::ostream& out, const RegretSummary& summary) {
  out << "t,mean_regret,stderr,regret_over_log_t,asymptotic_constant\n";
  for (std::size_t j = 0; j < summary.t.size(); ++j) {
    const auto t = summary.t[j];
    const double ratio = t >= 3 ? summary.mean_regret[j] / std::log(static_cast<double>(t))
                                : std::numeric_limits<double>::quiet_NaN();
    out << t << ',' << format_real(summary.mean_regret[j]) << ','
        << format_real(summary.stderr_regret[j]) << ',' << format_real(ratio) << ','
        << format_real(summary.asymptotic_constant) << '\n';
  }
}

std::string policy_csv_name(PolicyKind kind) {
  std::string name(policy_tag(kind));
  std::string out;
  for (char c : name) {
    if (c == '+') {
      out += "_plus";
    } else if (c == '-') {
      out += '_';
    } else {
      out += c;
    }
  }
  return out + ".csv";
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const BanditInstance instance = config.instance();

  RunResult result;
  result.output_dir = options.output_dir.value_or(config.output_path);
  std::vector<fs::path> written;
  bool created_dir = false;

  try {
    std::error_code ec;
    if (!fs::exists(result.output_dir)) {
      fs::create_directories(result.output_dir, ec);
      if (ec) {
        throw std::runtime_error("cannot create output directory " +
                                 result.output_dir.string() + ": " + ec.message());
      }
      created_dir = true;
    }

    nlohmann::json per_policy = nlohmann::json::array();
    for (auto kind : config.policies) {
      MonteCarloConfig mc{kind,
                          instance,
                          config.horizon,
                          config.replications,
                          config.base_seed,
                          config.checkpoint_ratio,
                          options.workers};
      auto summary = run_monte_carlo(mc);

      const fs::path csv = result.output_dir / policy_csv_name(kind);
      written.push_back(csv);
      auto out = open_output(csv);
      write_summary_csv(out, summary);
      finish(out, csv);
      result.csv_files.push_back(csv);

      const std::size_t last = summary.t.size() - 1;
      per_policy.push_back({
          {"policy", std::string(policy_tag(kind))},
          {"csv", csv.filename().string()},
          {"final_t", summary.t[last]},
          {"final_mean_regret", summary.mean_regret[last]},
          {"final_stderr", summary.stderr_regret[last]},
          {"final_regret_over_log_t",
           summary.t[last] >= 3
               ? summary.mean_regret[last] / std::log(static_cast<double>(summary.t[last]))
               : 0.0},
          {"asymptotic_constant", summary.asymptotic_constant},
      });
      result.summaries.push_back(std::move(summary));
    }

    result.plot_script = result.output_dir / "plot_regret.py";
    written.push_back(result.plot_script);
    {
      auto out = open_output(result.plot_script);
      out << kPlotScript;
      finish(out, result.plot_script);
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const nlohmann::json manifest = {
        {"config", config_echo(config, result.output_dir)},
        {"versions",
         {{"expts", kVersion}, {"compiler", __VERSION__}, {"cplusplus", __cplusplus}}},
        {"workers", resolve_workers(options.workers)},
        {"wall_time_seconds", wall},
        {"asymptotic_constant", instance.asymptotic_constant()},
        {"policies", per_policy},
    };
    result.manifest = result.output_dir / "manifest.json";
    written.push_back(result.manifest);
    auto out = open_output(result.manifest);
    out << manifest.dump(2) << '\n';
    finish(out, result.manifest);
  } catch (...) {
    std::error_code ignored;
    for (const auto& path : written) fs::remove(path, ignored);
    if (created_dir) fs::remove(result.output_dir, ignored);
    throw;
  }
  return result;
}

}  // namespace expts
