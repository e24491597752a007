#pragma once

// One-parameter exponential families in the mean parameterization.
//
// Every family is described by its variance function V(mu) and the divergence
//   kl(mu, mu') = integral_{mu}^{mu'} (x - mu) / V(x) dx,
// which each family also has in closed form. The closed forms are what the
// library evaluates; the integral is what the tests check them against.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expts/rng.hpp"

namespace expts {

enum class FamilyKind { kBernoulli, kGaussian, kExponential, kGamma, kPoisson };

// Open interval of admissible means, with extended-real endpoints.
struct MeanSupport {
  double lower;
  double upper;

  bool contains(double x) const { return x > lower && x < upper; }
  bool in_closure(double x) const { return x >= lower && x <= upper; }
  bool bounded_below() const { return std::isfinite(lower); }
  bool bounded_above() const { return std::isfinite(upper); }
};

class ExpFamilyModel {
 public:
  static ExpFamilyModel bernoulli();
  static ExpFamilyModel gaussian(double sigma2);
  static ExpFamilyModel exponential();
  static ExpFamilyModel gamma(double shape);
  static ExpFamilyModel poisson();

  // Parses "bernoulli", "gaussian:<sigma2>", "exponential", "gamma:<shape>",
  // "poisson". Throws std::invalid_argument on anything else.
  static ExpFamilyModel parse(std::string_view tag);

  // Inverse of parse(); the parameter is printed with round-trip precision.
  std::string tag() const;

  FamilyKind kind() const { return kind_; }
  // sigma^2 for Gaussian, shape k for Gamma, unused (1) otherwise.
  double parameter() const { return parameter_; }
  MeanSupport support() const;

  // Distance kept from a finite support endpoint: 2^-40 * (range or 1).
  double boundary_margin() const;
  // Clamps x into [lower + margin, upper - margin] for finite endpoints.
  double clamp_to_interior(double x) const;

  friend bool operator==(const ExpFamilyModel&, const ExpFamilyModel&) = default;

 private:
  ExpFamilyModel(FamilyKind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  FamilyKind kind_;
  double parameter_;
};

// V(x). Throws std::domain_error unless x is strictly inside the support.
double variance_at(const ExpFamilyModel& model, double x);

// Closed-form kl(mu, mu'). mu must be strictly inside the support and mu' in
// its closure (extended reals); mu' on the boundary yields +infinity.
// Throws std::domain_error otherwise.
double kl_divergence(const ExpFamilyModel& model, double mu, double mu_prime);

// One reward draw from the family member with mean mu.
double sample_reward(const ExpFamilyModel& model, double mu, Rng& rng);

namespace detail {

// Unchecked closed forms for interior arguments; hot path of the root finders.
inline double kl_interior(FamilyKind kind, double param, double mu, double x) {
  switch (kind) {
    case FamilyKind::kBernoulli:
      return mu * std::log(mu / x) + (1.0 - mu) * std::log((1.0 - mu) / (1.0 - x));
    case FamilyKind::kGaussian: {
      const double d = mu - x;
      return d * d / (2.0 * param);
    }
    case FamilyKind::kExponential:
      return std::log(x / mu) + mu / x - 1.0;
    case FamilyKind::kGamma:
      return param * (std::log(x / mu) + mu / x - 1.0);
    case FamilyKind::kPoisson:
      return mu * std::log(mu / x) + x - mu;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

inline double variance_interior(FamilyKind kind, double param, double x) {
  switch (kind) {
    case FamilyKind::kBernoulli:
      return x * (1.0 - x);
    case FamilyKind::kGaussian:
      return param;
    case FamilyKind::kExponential:
      return x * x;
    case FamilyKind::kGamma:
      return x * x / param;
    case FamilyKind::kPoisson:
      return x;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

// Maximum of V over an evenly spaced grid of [lo, hi] (inclusive), plus the
// Bernoulli peak at 1/2 when it lies inside.
double max_variance_on(const ExpFamilyModel& model, double lo, double hi,
                       std::size_t grid_points = 1001);

// Arm means plus a declared variance cap V over the instance's mean range.
class BanditInstance {
 public:
  // Throws std::invalid_argument when means is empty, a mean lies outside the
  // support, or variance_cap is below max_variance_on(min mean, max mean).
  BanditInstance(ExpFamilyModel model, std::vector<double> means, double variance_cap);

  // Uses max_variance_on(min mean, max mean) as the cap.
  static BanditInstance with_default_cap(ExpFamilyModel model, std::vector<double> means);

  const ExpFamilyModel& model() const { return model_; }
  std::span<const double> means() const { return means_; }
  double variance_cap() const { return variance_cap_; }
  std::size_t num_arms() const { return means_.size(); }

  double best_mean() const;
  double gap(std::size_t arm) const { return best_mean() - means_[arm]; }
  std::vector<double> gaps() const;

  // Sum over suboptimal arms of gap_i / kl(mu_i, mu_best); 0 if all equal.
  double asymptotic_constant() const;

 private:
  ExpFamilyModel model_;
  std::vector<double> means_;
  double variance_cap_;
  double best_mean_;
};

}  // namespace expts
