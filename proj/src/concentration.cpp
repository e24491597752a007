#include "expts/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "expts/parallel.hpp"
#include "expts/rng.hpp"

namespace expts {
namespace {

constexpr std::uint64_t kBlockSize = 4096;

struct EventCounts {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
};

BoundCheck make_check(std::uint64_t hits, std::uint64_t replications, double bound) {
  const double n = static_cast<double>(replications);
  const double empirical = static_cast<double>(hits) / n;
  const double sigma = std::sqrt(bound * (1.0 - bound) / n);
  return {empirical, bound, sigma, empirical <= bound + 3.0 * sigma};
}

double sub_gaussian_bound(std::uint64_t first_n, double distance, double variance) {
  if (std::isinf(distance)) return 0.0;
  return std::exp(-static_cast<double>(first_n) * distance * distance / (2.0 * variance));
}

}  // namespace

MaximalInequalityResult verify_maximal_inequality(const ExpFamilyModel& model, double mu,
                                                  double x, std::uint64_t first_n,
                                                  std::uint64_t last_n,
                                                  std::uint64_t replications,
                                                  std::uint64_t seed, unsigned workers) {
  const auto support = model.support();
  if (!support.contains(mu)) throw std::domain_error("maximal inequality: mu outside support");
  if (!(x < mu)) throw std::invalid_argument("maximal inequality: need x < mu");
  if (first_n == 0 || first_n > last_n) {
    throw std::invalid_argument("maximal inequality: need 1 <= N <= M");
  }
  if (replications == 0) throw std::invalid_argument("maximal inequality: no replications");

  MaximalInequalityResult result{};
  result.mu = mu;
  result.x = x;
  result.x_upper = 2.0 * mu - x;
  result.first_n = first_n;
  result.last_n = last_n;
  result.replications = replications;

  // V is only needed where kl is integrated: between the thresholds, clipped
  // to the interior of the support.
  const double lo = std::isfinite(x) ? model.clamp_to_interior(std::max(x, support.lower)) : mu;
  const double hi = std::isfinite(result.x_upper)
                        ? model.clamp_to_interior(std::min(result.x_upper, support.upper))
                        : mu;
  result.variance_bound = max_variance_on(model, std::min(lo, mu), std::max(hi, mu));

  // At a finite lower endpoint, kl(x, mu) is taken as its limit from inside.
  const bool x_admissible = support.contains(x) || x == support.lower;
  const double lower_kl_bound =
      x_admissible ? std::exp(-static_cast<double>(first_n) *
                              kl_divergence(model, model.clamp_to_interior(x), mu))
                   : 0.0;
  const double lower_sg_bound = sub_gaussian_bound(first_n, mu - x, result.variance_bound);
  const double upper_sg_bound =
      sub_gaussian_bound(first_n, result.x_upper - mu, result.variance_bound);

  const std::uint64_t blocks = (replications + kBlockSize - 1) / kBlockSize;
  std::vector<EventCounts> counts(blocks);
  parallel_for(blocks, workers, [&](std::size_t b) {
    Rng rng(mix_seed(seed, b));
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min(replications, begin + kBlockSize);
    EventCounts local;
    for (std::uint64_t r = begin; r < end; ++r) {
      double sum = 0.0;
      bool lower_hit = false;
      bool upper_hit = false;
      for (std::uint64_t n = 1; n <= last_n; ++n) {
        sum += sample_reward(model, mu, rng);
        if (n < first_n) continue;
        const double mean = sum / static_cast<double>(n);
        lower_hit = lower_hit || mean <= x;
        upper_hit = upper_hit || mean >= result.x_upper;
        if (lower_hit && upper_hit) break;
      }
      local.lower += lower_hit ? 1 : 0;
      local.upper += upper_hit ? 1 : 0;
    }
    counts[b] = local;
  });

  EventCounts total;
  for (const auto& c : counts) {
    total.lower += c.lower;
    total.upper += c.upper;
  }
  result.lower_kl = make_check(total.lower, replications, lower_kl_bound);
  result.lower_sub_gaussian = make_check(total.lower, replications, lower_sg_bound);
  result.upper_sub_gaussian = make_check(total.upper, replications, upper_sg_bound);
  return result;
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

std::vector<GaussianTailRow> verify_gaussian_tail(std::span<const double> z_grid) {
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double inv_sqrt_8pi = 1.0 / std::sqrt(8.0 * std::numbers::pi);
  std::vector<GaussianTailRow> rows;
  rows.reserve(z_grid.size());
  for (double z : z_grid) {
    if (!(z > 0.0)) throw std::invalid_argument("gaussian tail: z must be positive");
    GaussianTailRow row{};
    row.z = z;
    row.tail = normal_upper_tail(z);
    const double density = std::exp(-0.5 * z * z);
    row.upper_bound = density * inv_sqrt_2pi / z;
    row.lower_bound = z / (z * z + 1.0) * density * inv_sqrt_2pi;
    row.pass = row.upper_bound >= row.tail && row.tail >= row.lower_bound;
    if (z <= 1.0) {
      row.unit_interval_bound = density * inv_sqrt_8pi;
      row.pass = row.pass && row.tail >= *row.unit_interval_bound;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace expts
