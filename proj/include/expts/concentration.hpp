#pragma once

// Monte Carlo and analytic checks of the concentration inequalities used by
// the regret analysis: the maximal inequality for running empirical means,
// and the Mills-ratio sandwich for the Gaussian tail.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "expts/exp_family.hpp"

namespace expts {

struct BoundCheck {
  double empirical;  // observed exceedance frequency
  double bound;      // analytic upper bound
  double sigma;      // binomial std of the frequency at p = bound
  bool pass;         // empirical <= bound + 3 sigma
};

struct MaximalInequalityResult {
  double mu;
  double x;        // lower threshold, x <= mu
  double x_upper;  // mirrored threshold 2 mu - x
  std::uint64_t first_n;
  std::uint64_t last_n;
  std::uint64_t replications;
  double variance_bound;  // sup of V between x and x_upper, used by the sub-Gaussian forms

  BoundCheck lower_kl;           // P(exists n in [N, M]: mean_n <= x) <= exp(-N kl(x, mu))
  BoundCheck lower_sub_gaussian; // same event, exp(-N (x - mu)^2 / (2V))
  BoundCheck upper_sub_gaussian; // P(exists n: mean_n >= x_upper) <= exp(-N (x_upper - mu)^2 / (2V))

  bool pass() const { return lower_kl.pass && lower_sub_gaussian.pass && upper_sub_gaussian.pass; }
};

// Streams running means of i.i.d. rewards with mean mu, so memory does not
// grow with last_n. x may lie below the support (including -infinity), in
// which case the lower event is impossible and its bound is 0.
MaximalInequalityResult verify_maximal_inequality(const ExpFamilyModel& model, double mu,
                                                  double x, std::uint64_t first_n,
                                                  std::uint64_t last_n,
                                                  std::uint64_t replications,
                                                  std::uint64_t seed, unsigned workers = 0);

// P(Z > z) for standard normal Z, via erfc (relative error near 1 ulp).
double normal_upper_tail(double z);

struct GaussianTailRow {
  double z;
  double tail;         // P(Z > mu + z sigma)
  double upper_bound;  // exp(-z^2/2) / (z sqrt(2 pi))
  double lower_bound;  // z / (z^2 + 1) * exp(-z^2/2) / sqrt(2 pi)
  std::optional<double> unit_interval_bound;  // exp(-z^2/2) / sqrt(8 pi), 0 <= z <= 1
  bool pass;
};

std::vector<GaussianTailRow> verify_gaussian_tail(std::span<const double> z_grid);

}  // namespace expts
