#include "expts/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace expts {
namespace {

struct Entry {
  std::string value;
  std::size_t line;
};

const std::set<std::string, std::less<>> kKnownKeys = {
    "instance.family", "instance.means", "instance.variance_cap", "policies", "horizon",
    "replications",    "base_seed",      "checkpoint_ratio",      "output_path",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) return std::nullopt;
  }
  return value;
}

class Parser {
 public:
  explicit Parser(std::string_view text) { tokenize(text); }

  ExperimentConfig build() {
    ExperimentConfig config;
    const bool family_ok = read_family(config);
    const bool means_ok = read_means(config, family_ok);
    read_policies(config, family_ok);
    read_u64("horizon", config.horizon, true);
    read_u64("replications", config.replications, false);
    read_u64("base_seed", config.base_seed, false);
    read_ratio(config);
    if (const auto* e = find("output_path")) {
      if (e->value.empty()) {
        add(e->line, "output_path", "must not be empty");
      } else {
        config.output_path = e->value;
      }
    }

    if (config.replications == 0) add(line_of("replications"), "replications", "must be >= 1");
    if (means_ok && config.horizon != 0 && config.horizon < config.means.size()) {
      add(line_of("horizon"), "horizon",
          "must be at least the number of arms (" + std::to_string(config.means.size()) + ")");
    }
    if (family_ok && means_ok) read_variance_cap(config);

    if (!issues_.empty()) throw ConfigError(std::move(issues_));
    return config;
  }

 private:
  void tokenize(std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
      ++line_no;
      const auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        add(line_no, "", "expected 'key = value'");
        continue;
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) {
        add(line_no, "", "missing key before '='");
      } else if (!kKnownKeys.contains(key)) {
        add(line_no, key, "unknown key");
      } else if (entries_.contains(key)) {
        add(line_no, key, "duplicate key (first set on line " +
                              std::to_string(entries_.at(key).line) + ")");
      } else {
        entries_.emplace(key, Entry{value, line_no});
      }
    }
  }

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t line_of(const std::string& key) const {
    const auto* e = find(key);
    return e ? e->line : 0;
  }

  void add(std::size_t line, std::string key, std::string message) {
    issues_.push_back({line, std::move(key), std::move(message)});
  }

  const Entry* require(const std::string& key) {
    const auto* e = find(key);
    if (!e) add(0, key, "required key is missing");
    return e;
  }

  bool read_family(ExperimentConfig& config) {
    const auto* e = require("instance.family");
    if (!e) return false;
    try {
      config.family = ExpFamilyModel::parse(e->value);
      return true;
    } catch (const std::invalid_argument& err) {
      add(e->line, "instance.family", err.what());
      return false;
    }
  }

  bool read_means(ExperimentConfig& config, bool family_ok) {
    const auto* e = require("instance.means");
    if (!e) return false;
    bool ok = true;
    for (auto item : split_list(e->value)) {
      const auto value = parse_number<double>(item);
      if (!value) {
        add(e->line, "instance.means", "'" + std::string(item) + "' is not a number");
        ok = false;
        continue;
      }
      if (family_ok && !config.family.support().contains(*value)) {
        add(e->line, "instance.means",
            "mean " + std::string(item) + " is outside the support of " + config.family.tag());
        ok = false;
      }
      config.means.push_back(*value);
    }
    if (ok && config.means.empty()) {
      add(e->line, "instance.means", "needs at least one arm");
      ok = false;
    }
    return ok;
  }

  void read_policies(ExperimentConfig& config, bool family_ok) {
    const auto* e = require("policies");
    if (!e) return;
    for (auto item : split_list(e->value)) {
      const auto kind = parse_policy(item);
      if (!kind) {
        add(e->line, "policies",
            "unknown policy '" + std::string(item) + "' (valid: " + valid_policy_tags() + ")");
        continue;
      }
      if (std::find(config.policies.begin(), config.policies.end(), *kind) !=
          config.policies.end()) {
        add(e->line, "policies", "policy '" + std::string(item) + "' listed twice");
        continue;
      }
      if (family_ok) {
        try {
          check_compatible(*kind, config.family);
        } catch (const std::invalid_argument& err) {
          add(e->line, "policies", err.what());
        }
      }
      config.policies.push_back(*kind);
    }
  }

  void read_u64(const std::string& key, std::uint64_t& out, bool required) {
    const auto* e = required ? require(key) : find(key);
    if (!e) return;
    const auto value = parse_number<std::uint64_t>(e->value);
    if (!value) {
      add(e->line, key, "'" + e->value + "' is not a nonnegative integer");
      return;
    }
    out = *value;
    if (required && out == 0) add(e->line, key, "must be positive");
  }

  void read_ratio(ExperimentConfig& config) {
    const auto* e = find("checkpoint_ratio");
    if (!e) return;
    const auto value = parse_number<double>(e->value);
    if (!value || !(*value > 1.0)) {
      add(e->line, "checkpoint_ratio", "must be a number greater than 1");
      return;
    }
    config.checkpoint_ratio = *value;
  }

  void read_variance_cap(ExperimentConfig& config) {
    const auto [lo, hi] = std::minmax_element(config.means.begin(), config.means.end());
    const double needed = max_variance_on(config.family, *lo, *hi);
    const auto* e = find("instance.variance_cap");
    if (!e) {
      config.variance_cap = needed;
      return;
    }
    const auto value = parse_number<double>(e->value);
    if (!value || !(*value > 0.0)) {
      add(e->line, "instance.variance_cap", "must be a positive number");
      return;
    }
    if (*value < needed) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "is below the maximum variance " << needed << " over the arm means";
      add(e->line, "instance.variance_cap", msg.str());
      return;
    }
    config.variance_cap = *value;
  }

  std::map<std::string, Entry, std::less<>> entries_;
  std::vector<ConfigIssue> issues_;
};

std::string describe(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid experiment config:";
  for (const auto& issue : issues) {
    out += "\n  ";
    if (issue.line != 0) out += "line " + std::to_string(issue.line) + ": ";
    if (!issue.key.empty()) out += issue.key + ": ";
    out += issue.message;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}

ExperimentConfig parse_config(std::string_view text) { return Parser(text).build(); }

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{0, "", "cannot read config file " + path.string()}});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace expts
