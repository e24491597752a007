#pragma once

#include <cstdint>
#include <random>

namespace expts {

/// SplitMix64 finalizer. Used to derive independent per-replication seeds.
std::uint64_t splitmix64(std::uint64_t z);

/// Replication seed: splitmix64(base + 0x9E3779B97F4A7C15 * (index + 1)),
/// all arithmetic modulo 2^64.
std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t index);

// Deterministic random stream. One instance per episode / worker; not
// thread-safe.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1); never returns exactly 0 or 1.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }
  double gamma(double shape);
  double beta(double a, double b);
  double poisson(double mean);
  double exponential(double mean);
  bool bernoulli(double p) { return uniform_open() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace expts
