#include "expts/config.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace expts {
namespace {

constexpr const char* kMinimal = R"(
instance.family = bernoulli
instance.means  = 0.8, 0.5
policies        = expts, ucb1
horizon         = 1000
)";

bool mentions(const ConfigError& e, const std::string& key, const std::string& text) {
  return std::any_of(e.issues().begin(), e.issues().end(), [&](const ConfigIssue& issue) {
    return issue.key.find(key) != std::string::npos &&
           issue.message.find(text) != std::string::npos;
  });
}

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a ConfigError for:\n" << text;
  return ConfigError({});
}

TEST(ParseConfig, MinimalDocumentGetsDefaults) {
  const auto config = parse_config(kMinimal);
  EXPECT_EQ(config.family, ExpFamilyModel::bernoulli());
  EXPECT_EQ(config.means, (std::vector<double>{0.8, 0.5}));
  EXPECT_EQ(config.policies, (std::vector<PolicyKind>{PolicyKind::kExpTS, PolicyKind::kUCB1}));
  EXPECT_EQ(config.horizon, 1000u);
  EXPECT_EQ(config.replications, 100u);
  EXPECT_EQ(config.base_seed, 0u);
  EXPECT_NEAR(config.checkpoint_ratio, std::pow(10.0, 0.125), 1e-15);
  EXPECT_EQ(config.output_path, std::filesystem::path("results"));
  // max x(1 - x) over [0.5, 0.8]
  EXPECT_DOUBLE_EQ(config.variance_cap, 0.25);
  EXPECT_EQ(config.instance().num_arms(), 2u);
}

TEST(ParseConfig, AllKeys) {
  const auto config = parse_config(R"(
# full document
instance.family = gamma:2.5   # shape 2.5
instance.means = 1, 2.5, 0.5
instance.variance_cap = 4
policies = expts+, gaussian-ts, moss, kl-ucb
horizon = 50
replications = 7
base_seed = 12345678901234
checkpoint_ratio = 2
output_path = out/dir
)");
  EXPECT_EQ(config.family, ExpFamilyModel::gamma(2.5));
  EXPECT_EQ(config.variance_cap, 4.0);
  EXPECT_EQ(config.policies.size(), 4u);
  EXPECT_EQ(config.replications, 7u);
  EXPECT_EQ(config.base_seed, 12345678901234u);
  EXPECT_EQ(config.checkpoint_ratio, 2.0);
  EXPECT_EQ(config.output_path, std::filesystem::path("out/dir"));
}

TEST(ParseConfig, MeanOutsideSupportNamesMeans) {
  const auto e = parse_error(R"(
instance.family = bernoulli
instance.means = 1.5, 0.5
policies = expts
horizon = 100
)");
  EXPECT_TRUE(mentions(e, "means", "1.5"));
  EXPECT_NE(std::string(e.what()).find("means"), std::string::npos);
  EXPECT_EQ(e.issues().front().line, 3u);
}

TEST(ParseConfig, UnknownPolicyListsValidTags) {
  const auto e = parse_error(R"(
instance.family = gaussian:1
instance.means = 0, 1
policies = expts++
horizon = 100
)");
  for (auto kind : all_policies()) {
    EXPECT_TRUE(mentions(e, "policies", std::string(policy_tag(kind)))) << policy_tag(kind);
  }
  EXPECT_TRUE(mentions(e, "policies", "expts++"));
}

TEST(ParseConfig, ReportsEveryProblem) {
  const auto e = parse_error(R"(
instance.family = gaussian:1
instance.means = 0, x
policies = bernoulli-ts, ucb1, ucb1
replications = 0
checkpoint_ratio = 0.5
colour = blue
)");
  EXPECT_TRUE(mentions(e, "means", "not a number"));
  EXPECT_TRUE(mentions(e, "policies", "bernoulli"));
  EXPECT_TRUE(mentions(e, "policies", "twice"));
  EXPECT_TRUE(mentions(e, "horizon", "missing"));
  EXPECT_TRUE(mentions(e, "replications", ">= 1"));
  EXPECT_TRUE(mentions(e, "checkpoint_ratio", "greater than 1"));
  EXPECT_TRUE(mentions(e, "colour", "unknown key"));
  EXPECT_GE(e.issues().size(), 7u);
}

TEST(ParseConfig, StructuralErrors) {
  const auto e = parse_error("instance.family = bernoulli\nno equals sign here\n"
                             "instance.family = poisson\n");
  EXPECT_TRUE(mentions(e, "", "key = value"));
  EXPECT_TRUE(mentions(e, "instance.family", "duplicate"));
  EXPECT_TRUE(mentions(e, "instance.means", "missing"));
  EXPECT_TRUE(mentions(e, "policies", "missing"));
}

TEST(ParseConfig, VarianceCapAndHorizonChecks) {
  const auto e = parse_error(R"(
instance.family = poisson
instance.means = 1, 4, 2
instance.variance_cap = 3
policies = expts
horizon = 2
)");
  EXPECT_TRUE(mentions(e, "variance_cap", "below"));
  EXPECT_TRUE(mentions(e, "horizon", "number of arms"));
  const auto bad_family = parse_error("instance.family = cauchy\ninstance.means = 0\n"
                                      "policies = ucb1\nhorizon = 5\n");
  EXPECT_TRUE(mentions(bad_family, "instance.family", "cauchy"));
}

TEST(LoadConfig, FromFile) {
  const auto path = std::filesystem::temp_directory_path() / "expts_config_test.cfg";
  {
    std::ofstream out(path);
    out << kMinimal;
  }
  EXPECT_EQ(load_config(path).horizon, 1000u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}

}  // namespace
}  // namespace expts
