#include "expts/rng.hpp"

#include <cmath>

namespace expts {

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(base_seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

double Rng::gamma(double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

double Rng::poisson(double mean) {
  return static_cast<double>(std::poisson_distribution<std::int64_t>(mean)(engine_));
}

double Rng::exponential(double mean) { return -mean * std::log(uniform_open()); }

}  // namespace expts
