// Command-line front end: config-driven experiments plus verification
// subcommands. Exit status is 0 only when all requested work succeeded.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expts/config.hpp"
#include "expts/report.hpp"
#include "expts/suites.hpp"

namespace {

using namespace expts;

int run_config(const std::string& config_path, unsigned workers,
               std::optional<std::uint64_t> seed) {
  auto config = load_config(config_path);
  if (seed) config.base_seed = *seed;
  RunOptions options;
  options.workers = workers;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    options.output_dir = dir;
  }
  const auto result = run_experiment(config, options);
  for (std::size_t i = 0; i < config.policies.size(); ++i) {
    const auto& s = result.summaries[i];
    std::cout << std::left << std::setw(14) << policy_tag(config.policies[i])
              << " T=" << s.t.back() << "  mean regret " << format_real(s.mean_regret.back())
              << " +/- " << format_real(s.stderr_regret.back()) << "  -> "
              << result.csv_files[i].string() << '\n';
  }
  std::cout << "manifest: " << result.manifest.string() << '\n';
  return 0;
}

int run_sampler_dump(const std::string& family, double mu, std::uint64_t n, std::size_t points,
                     const std::string& output) {
  const auto model = ExpFamilyModel::parse(family);
  const auto rows = sampler_dump(model, SamplerParams::make(mu, n), points);
  if (output.empty() || output == "-") {
    write_dump_csv(std::cout, rows);
    return 0;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + output + " for writing");
  write_dump_csv(out, rows);
  return out ? 0 : 1;
}

int run_verify_tails(std::size_t draws, std::uint64_t seed, unsigned workers) {
  const auto cases = default_sampler_cases();
  const auto reports = verify_tails(cases, draws, seed, workers);
  bool ok = true;
  for (const auto& r : reports) {
    const auto& c = r.sampler_case;
    std::size_t tail_failures = 0;
    for (const auto& t : r.tails) tail_failures += t.pass ? 0 : 1;
    std::cout << (r.pass() ? "PASS" : "FAIL") << "  " << std::left << std::setw(14)
              << c.model.tag() << " mu=" << std::setw(6) << c.mu << " n=" << std::setw(5) << c.n
              << " KS=" << std::setprecision(5) << r.ks << " (crit " << r.ks_critical << ")"
              << " tail checks failed: " << tail_failures << "/" << r.tails.size() << '\n';
    ok = ok && r.pass();
  }
  return ok ? 0 : 1;
}

int run_verify_maximal(std::uint64_t replications, std::uint64_t seed, unsigned workers) {
  const auto cases = default_maximal_cases();
  const auto results = verify_maximal(cases, replications, seed, workers);
  bool ok = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    std::cout << (r.pass() ? "PASS" : "FAIL") << "  " << std::left << std::setw(14)
              << cases[i].model.tag() << " mu=" << r.mu << " x=" << r.x << " N=" << r.first_n
              << " M=" << r.last_n << "  P(lower)=" << r.lower_kl.empirical
              << " <= " << r.lower_kl.bound << " (kl), " << r.lower_sub_gaussian.bound
              << " (sub-G)  P(upper)=" << r.upper_sub_gaussian.empirical
              << " <= " << r.upper_sub_gaussian.bound << '\n';
    ok = ok && r.pass();
  }
  return ok ? 0 : 1;
}

int run_sweep(const std::string& policy_tag_text, std::vector<std::uint64_t> horizons,
              std::vector<std::uint64_t> arms, std::uint64_t replications, std::uint64_t seed,
              unsigned workers) {
  const auto policy = parse_policy(policy_tag_text);
  if (!policy) {
    throw std::invalid_argument("unknown policy '" + policy_tag_text +
                                "' (valid: " + valid_policy_tags() + ")");
  }
  const auto result = sweep_minimax(*policy, horizons, arms, replications, seed, workers);
  bool ok = true;
  std::cout << "K,T,gap,mean_regret,stderr,sqrt_VKT\n";
  for (const auto& p : result.points) {
    std::cout << p.arms << ',' << p.horizon << ',' << format_real(p.gap) << ','
              << format_real(p.mean_regret) << ',' << format_real(p.stderr_regret) << ','
              << format_real(p.sqrt_vkt) << '\n';
    ok = ok && p.mean_regret <= 10.0 * p.sqrt_vkt;
  }
  for (const auto& s : result.slopes) {
    const bool in_band = s.slope >= kSweepSlopeLow && s.slope <= kSweepSlopeHigh;
    std::cout << (in_band ? "PASS" : "FAIL") << "  K=" << s.arms << " log-log slope "
              << std::setprecision(4) << s.slope << " (band [" << kSweepSlopeLow << ", "
              << kSweepSlopeHigh << "])\n";
    ok = ok && in_band;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thompson sampling for exponential-family bandits: experiments and checks"};
  app.require_subcommand(0, 1);

  std::string config_path;
  unsigned workers = 0;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "Experiment config file (runs the experiment)");
  app.add_option("--workers", workers, "Worker threads (0 = all cores)");
  app.add_option("--seed", seed, "Base seed (overrides the config)");
  app.fallthrough();

  auto* dump = app.add_subcommand("sampler-dump", "Emit x,pdf,cdf CSV of P(mu, n)");
  std::string family = "bernoulli";
  double mu = 0.5;
  std::uint64_t n = 2;
  std::size_t points = 201;
  std::string output;
  dump->add_option("--family", family, "Family tag")->capture_default_str();
  dump->add_option("--mu", mu, "Mean")->capture_default_str();
  dump->add_option("--n", n, "Pull count")->capture_default_str()->check(CLI::PositiveNumber);
  dump->add_option("--points", points, "Grid size")->capture_default_str();
  dump->add_option("-o,--output", output, "Output file (default stdout)");

  auto* tails = app.add_subcommand("verify-tails", "KS and tail-identity checks of the sampler");
  std::size_t draws = 100000;
  tails->add_option("--draws", draws, "Draws per case")->capture_default_str();

  auto* maximal = app.add_subcommand("verify-maximal", "Monte Carlo maximal-inequality grid");
  std::uint64_t maximal_reps = 100000;
  maximal->add_option("--replications", maximal_reps, "Replications per case")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep-minimax", "Regret scaling on sqrt(VK/T)-gap instances");
  std::string sweep_policy = "expts+";
  std::vector<std::uint64_t> horizons{1000, 10000, 100000};
  std::vector<std::uint64_t> arms{2, 10, 50};
  std::uint64_t sweep_reps = 100;
  sweep->add_option("--policy", sweep_policy, "Policy tag")->capture_default_str();
  sweep->add_option("--horizons", horizons, "Horizon grid")->capture_default_str();
  sweep->add_option("--arms", arms, "Arm-count grid")->capture_default_str();
  sweep->add_option("--replications", sweep_reps, "Replications per point")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const std::uint64_t base_seed = seed.value_or(0);
    if (dump->parsed()) return run_sampler_dump(family, mu, n, points, output);
    if (tails->parsed()) return run_verify_tails(draws, base_seed, workers);
    if (maximal->parsed()) return run_verify_maximal(maximal_reps, base_seed, workers);
    if (sweep->parsed()) {
      return run_sweep(sweep_policy, horizons, arms, sweep_reps, base_seed, workers);
    }
    if (!config_path.empty()) return run_config(config_path, workers, seed);
    std::cerr << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
