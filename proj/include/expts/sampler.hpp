#pragma once

// The ExpTS sampling distribution P(mu, n) and its greedy mixture P+(mu, n).
//
// P(mu, n) has density
//   f(x) = n b_n |x - mu| / (2 V(x)) * exp(-n b_n kl(mu, x))
// and exact tails
//   P(theta >= z) = 1/2 exp(-n b_n kl(mu, z))   for z >= mu,
//   P(theta <= z) = 1/2 exp(-n b_n kl(mu, z))   for z <= mu,
// so it is sampled exactly by inverting the CDF, which reduces to solving
// kl(mu, x) = c on one side of mu.
//
// With n = 1 the default b_1 = 0 makes the distribution improper (half of the
// mass sits on each end of the support). Draws then return +/-infinity
// sentinels, which order above/below every finite draw.

#include <cstdint>

#include "expts/exp_family.hpp"
#include "expts/rng.hpp"

namespace expts {

// b_n = (n - 1) / n.
double b_coeff(std::uint64_t n);

struct SamplerParams {
  double mu;
  std::uint64_t n;
  double b_n;

  // Default exploration coefficient b_n = (n - 1) / n. Throws on n = 0.
  static SamplerParams make(double mu, std::uint64_t n);
  // Caller-chosen b >= 0; no optimality claim is attached to overrides.
  static SamplerParams with_coefficient(double mu, std::uint64_t n, double b);

  double rate() const { return static_cast<double>(n) * b_n; }
};

enum class KlSide { kUpper, kLower };

enum class RootMethod {
  kHybrid,     // Newton steps inside a maintained bisection bracket
  kBisection,  // plain bisection to full precision
};

struct KlInversion {
  double value;
  // True when kl(mu, .) never reaches c before the clamped support edge (or
  // the largest finite double); value is then that edge.
  bool saturated;
};

// Solves kl(mu, x) = c for x >= mu (kUpper) or x <= mu (kLower).
// Gaussian families use the closed form mu +/- sqrt(2 sigma^2 c).
KlInversion invert_kl(const ExpFamilyModel& model, double mu, double c, KlSide side,
                      RootMethod method = RootMethod::kHybrid);

// P(theta >= z) for theta ~ P(mu, n). z must lie in the closure of the support.
double tail_probability(const ExpFamilyModel& model, const SamplerParams& params, double z);
double cdf(const ExpFamilyModel& model, const SamplerParams& params, double x);
double pdf(const ExpFamilyModel& model, const SamplerParams& params, double x);

// Inverse-CDF draw for a given uniform y in (0, 1).
double sample_at(const ExpFamilyModel& model, const SamplerParams& params, double y);
double sample(const ExpFamilyModel& model, const SamplerParams& params, Rng& rng);

// P+: returns mu when coin < 1 - 1/K, otherwise sample_at(y).
double sample_plus_at(const ExpFamilyModel& model, const SamplerParams& params,
                      std::uint64_t num_arms, double coin, double y);
double sample_plus(const ExpFamilyModel& model, const SamplerParams& params,
                   std::uint64_t num_arms, Rng& rng);

inline bool is_sentinel(double theta) { return std::isinf(theta); }

}  // namespace expts
