#include "expts/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace expts {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxFinite = std::numeric_limits<double>::max();
constexpr int kMaxIterations = 400;

// kl(mu, .) - c restricted to the interior, with its derivative (x - mu) / V(x).
struct KlEquation {
  FamilyKind kind;
  double param;
  double mu;
  double c;

  double value(double x) const { return detail::kl_interior(kind, param, mu, x) - c; }
  double slope(double x) const { return (x - mu) / detail::variance_interior(kind, param, x); }
};

// Bracket [lo, hi] with value(lo) and value(hi) of opposite sign (or zero).
double bisect(const KlEquation& eq, double lo, double hi) {
  const double f_lo = eq.value(lo);
  for (int i = 0; i < kMaxIterations; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = eq.value(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

// Safeguarded Newton: a Newton step is taken only when it lands inside the
// current bracket and shrinks faster than bisection would; otherwise bisect.
double newton_bisect(const KlEquation& eq, double lo, double hi, double guess) {
  const double f_lo = eq.value(lo);
  const bool lo_negative = f_lo < 0.0;
  double x = (guess > lo && guess < hi) ? guess : lo + 0.5 * (hi - lo);
  double step_before_last = hi - lo;
  double last_step = step_before_last;

  for (int i = 0; i < kMaxIterations; ++i) {
    const double f = eq.value(x);
    if (f == 0.0) return x;
    if ((f < 0.0) == lo_negative) {
      lo = x;
    } else {
      hi = x;
    }
    if (!(hi - lo > 2.0 * std::numeric_limits<double>::epsilon() *
                       std::max(std::abs(lo), std::abs(hi)))) {
      return lo + 0.5 * (hi - lo);
    }

    const double slope = eq.slope(x);
    const double newton = slope != 0.0 ? x - f / slope : kInf;
    const double newton_step = std::abs(newton - x);
    if (newton > lo && newton < hi && newton_step < 0.5 * std::abs(step_before_last)) {
      step_before_last = last_step;
      last_step = newton_step;
      if (newton_step <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(newton)) {
        return newton;
      }
      x = newton;
    } else {
      step_before_last = last_step;
      last_step = 0.5 * (hi - lo);
      x = lo + 0.5 * (hi - lo);
    }
  }
  return x;
}

double solve(const KlEquation& eq, double lo, double hi, double guess, RootMethod method) {
  return method == RootMethod::kBisection ? bisect(eq, lo, hi) : newton_bisect(eq, lo, hi, guess);
}

void require_params(const ExpFamilyModel& model, const SamplerParams& params) {
  if (!model.support().contains(params.mu)) {
    throw std::domain_error("sampler mu is outside the mean support of " + model.tag());
  }
}

double exp_neg(double rate, double kl) {
  // kl = +inf at the support boundary carries no mass even when rate = 0.
  if (std::isinf(kl)) return 0.0;
  return std::exp(-rate * kl);
}

}  // namespace

double b_coeff(std::uint64_t n) {
  return static_cast<double>(n - 1) / static_cast<double>(n);
}

SamplerParams SamplerParams::make(double mu, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("sampler pull count must be at least 1");
  return {mu, n, b_coeff(n)};
}

SamplerParams SamplerParams::with_coefficient(double mu, std::uint64_t n, double b) {
  if (n == 0) throw std::invalid_argument("sampler pull count must be at least 1");
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("sampler coefficient b must be finite and nonnegative");
  }
  return {mu, n, b};
}

KlInversion invert_kl(const ExpFamilyModel& model, double mu, double c, KlSide side,
                      RootMethod method) {
  const auto support = model.support();
  if (!support.contains(mu)) {
    throw std::domain_error("invert_kl: mu is outside the mean support of " + model.tag());
  }
  if (!(c >= 0.0)) throw std::domain_error("invert_kl: c must be nonnegative");
  if (c == 0.0) return {mu, false};

  const double sign = side == KlSide::kUpper ? 1.0 : -1.0;
  if (model.kind() == FamilyKind::kGaussian) {
    const double x = mu + sign * std::sqrt(2.0 * model.parameter() * c);
    if (std::isfinite(x)) return {x, false};
    return {sign * kMaxFinite, true};
  }

  const KlEquation eq{model.kind(), model.parameter(), mu, c};
  const double margin = model.boundary_margin();
  const double width = std::sqrt(2.0 * detail::variance_interior(eq.kind, eq.param, mu) * c);
  const double guess = mu + sign * width;

  double lo = 0.0;
  double hi = 0.0;
  if (side == KlSide::kUpper) {
    lo = mu;
    if (support.bounded_above()) {
      hi = support.upper - margin;
      if (hi <= mu) return {mu, true};
      if (eq.value(hi) < 0.0) return {hi, true};
    } else {
      double w = width;
      hi = mu + w;
      while (eq.value(hi) < 0.0) {
        lo = hi;
        w *= 2.0;
        hi = mu + w;
        if (!std::isfinite(hi) || hi > kMaxFinite) return {kMaxFinite, true};
      }
    }
  } else {
    hi = mu;
    if (support.bounded_below()) {
      lo = support.lower + margin;
      if (lo >= mu) return {mu, true};
      if (eq.value(lo) < 0.0) return {lo, true};
    } else {
      double w = width;
      lo = mu - w;
      while (eq.value(lo) < 0.0) {
        hi = lo;
        w *= 2.0;
        lo = mu - w;
        if (!std::isfinite(lo) || lo < -kMaxFinite) return {-kMaxFinite, true};
      }
    }
  }
  return {solve(eq, lo, hi, guess, method), false};
}

double tail_probability(const ExpFamilyModel& model, const SamplerParams& params, double z) {
  require_params(model, params);
  if (z == params.mu) return 0.5;
  const double half_tail = 0.5 * exp_neg(params.rate(), kl_divergence(model, params.mu, z));
  return z > params.mu ? half_tail : 1.0 - half_tail;
}

double cdf(const ExpFamilyModel& model, const SamplerParams& params, double x) {
  require_params(model, params);
  if (x == params.mu) return 0.5;
  const double half_tail = 0.5 * exp_neg(params.rate(), kl_divergence(model, params.mu, x));
  return x > params.mu ? 1.0 - half_tail : half_tail;
}

double pdf(const ExpFamilyModel& model, const SamplerParams& params, double x) {
  require_params(model, params);
  const auto support = model.support();
  if (!support.contains(x)) {
    if (support.in_closure(x)) return 0.0;
    throw std::domain_error("pdf: x is outside the closure of the mean support");
  }
  const double rate = params.rate();
  const double weight = exp_neg(rate, kl_divergence(model, params.mu, x));
  // Underflowed weight: V(x) may also have underflowed near a zero of V.
  if (weight == 0.0) return 0.0;
  return rate * std::abs(x - params.mu) / (2.0 * variance_at(model, x)) * weight;
}

double sample_at(const ExpFamilyModel& model, const SamplerParams& params, double y) {
  require_params(model, params);
  if (!(y > 0.0 && y < 1.0)) throw std::domain_error("sample_at: y must lie in (0, 1)");
  const double rate = params.rate();
  if (rate == 0.0) return y >= 0.5 ? kInf : -kInf;
  if (y == 0.5) return params.mu;
  if (y > 0.5) {
    // 2 (1 - y) is exact for y in [1/2, 1).
    const double c = -std::log(2.0 * (1.0 - y)) / rate;
    return invert_kl(model, params.mu, c, KlSide::kUpper).value;
  }
  const double c = -std::log(2.0 * y) / rate;
  return invert_kl(model, params.mu, c, KlSide::kLower).value;
}

double sample(const ExpFamilyModel& model, const SamplerParams& params, Rng& rng) {
  return sample_at(model, params, rng.uniform_open());
}

double sample_plus_at(const ExpFamilyModel& model, const SamplerParams& params,
                      std::uint64_t num_arms, double coin, double y) {
  if (num_arms == 0) throw std::invalid_argument("sample_plus: K must be at least 1");
  const double greedy = 1.0 - 1.0 / static_cast<double>(num_arms);
  if (coin < greedy) {
    require_params(model, params);
    return params.mu;
  }
  return sample_at(model, params, y);
}

double sample_plus(const ExpFamilyModel& model, const SamplerParams& params,
                   std::uint64_t num_arms, Rng& rng) {
  if (num_arms == 0) throw std::invalid_argument("sample_plus: K must be at least 1");
  const double greedy = 1.0 - 1.0 / static_cast<double>(num_arms);
  if (rng.uniform_open() < greedy) {
    require_params(model, params);
    return params.mu;
  }
  return sample(model, params, rng);
}

}  // namespace expts
