#include "expts/exp_family.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace expts {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_positive(std::string_view text, std::string_view tag) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("family tag '" + std::string(tag) +
                                "': parameter must be a positive finite number");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_interior(const ExpFamilyModel& model, double x, const char* what) {
  if (!model.support().contains(x)) {
    throw std::domain_error(std::string(what) + " = " + format_double(x) +
                            " is outside the mean support of " + model.tag());
  }
}

}  // namespace

ExpFamilyModel ExpFamilyModel::bernoulli() { return {FamilyKind::kBernoulli, 1.0}; }

ExpFamilyModel ExpFamilyModel::gaussian(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("gaussian variance must be positive and finite");
  }
  return {FamilyKind::kGaussian, sigma2};
}

ExpFamilyModel ExpFamilyModel::exponential() { return {FamilyKind::kExponential, 1.0}; }

ExpFamilyModel ExpFamilyModel::gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("gamma shape must be positive and finite");
  }
  return {FamilyKind::kGamma, shape};
}

ExpFamilyModel ExpFamilyModel::poisson() { return {FamilyKind::kPoisson, 1.0}; }

ExpFamilyModel ExpFamilyModel::parse(std::string_view tag) {
  const auto colon = tag.find(':');
  const auto name = tag.substr(0, colon);
  const bool has_param = colon != std::string_view::npos;
  const auto param = has_param ? tag.substr(colon + 1) : std::string_view{};

  if (name == "gaussian" && has_param) return gaussian(parse_positive(param, tag));
  if (name == "gamma" && has_param) return gamma(parse_positive(param, tag));
  if (!has_param) {
    if (name == "bernoulli") return bernoulli();
    if (name == "exponential") return exponential();
    if (name == "poisson") return poisson();
  }
  throw std::invalid_argument("unknown family tag '" + std::string(tag) +
                              "' (expected bernoulli, gaussian:<sigma2>, exponential, "
                              "gamma:<shape>, poisson)");
}

std::string ExpFamilyModel::tag() const {
  switch (kind_) {
    case FamilyKind::kBernoulli:
      return "bernoulli";
    case FamilyKind::kGaussian:
      return "gaussian:" + format_double(parameter_);
    case FamilyKind::kExponential:
      return "exponential";
    case FamilyKind::kGamma:
      return "gamma:" + format_double(parameter_);
    case FamilyKind::kPoisson:
      return "poisson";
  }
  return {};
}

MeanSupport ExpFamilyModel::support() const {
  switch (kind_) {
    case FamilyKind::kBernoulli:
      return {0.0, 1.0};
    case FamilyKind::kGaussian:
      return {-kInf, kInf};
    case FamilyKind::kExponential:
    case FamilyKind::kGamma:
    case FamilyKind::kPoisson:
      return {0.0, kInf};
  }
  return {-kInf, kInf};
}

double ExpFamilyModel::boundary_margin() const {
  const auto s = support();
  const double range = s.upper - s.lower;
  return 0x1.0p-40 * (std::isfinite(range) ? range : 1.0);
}

double ExpFamilyModel::clamp_to_interior(double x) const {
  const auto s = support();
  const double margin = boundary_margin();
  if (s.bounded_below() && x < s.lower + margin) return s.lower + margin;
  if (s.bounded_above() && x > s.upper - margin) return s.upper - margin;
  return x;
}

double variance_at(const ExpFamilyModel& model, double x) {
  require_interior(model, x, "x");
  return detail::variance_interior(model.kind(), model.parameter(), x);
}

double kl_divergence(const ExpFamilyModel& model, double mu, double mu_prime) {
  require_interior(model, mu, "mu");
  const auto s = model.support();
  if (std::isnan(mu_prime) || !s.in_closure(mu_prime)) {
    throw std::domain_error("mu' = " + format_double(mu_prime) +
                            " is outside the closure of the mean support of " + model.tag());
  }
  if (mu_prime == s.lower || mu_prime == s.upper) return kInf;
  if (mu_prime == mu) return 0.0;
  // Rounding can push the closed forms a hair below zero near mu' = mu.
  return std::max(0.0, detail::kl_interior(model.kind(), model.parameter(), mu, mu_prime));
}

double sample_reward(const ExpFamilyModel& model, double mu, Rng& rng) {
  require_interior(model, mu, "mu");
  switch (model.kind()) {
    case FamilyKind::kBernoulli:
      return rng.bernoulli(mu) ? 1.0 : 0.0;
    case FamilyKind::kGaussian:
      return mu + std::sqrt(model.parameter()) * rng.normal();
    case FamilyKind::kExponential:
      return rng.exponential(mu);
    case FamilyKind::kGamma:
      return rng.gamma(model.parameter()) * (mu / model.parameter());
    case FamilyKind::kPoisson:
      return rng.poisson(mu);
  }
  return mu;
}

double max_variance_on(const ExpFamilyModel& model, double lo, double hi,
                       std::size_t grid_points) {
  require_interior(model, lo, "lo");
  require_interior(model, hi, "hi");
  if (grid_points < 2 || lo == hi) return variance_at(model, lo);
  double best = 0.0;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const double x = i + 1 == grid_points ? hi : lo + t * (hi - lo);
    best = std::max(best, variance_at(model, x));
  }
  // x(1 - x) is the only non-monotone V; its peak may fall between grid points.
  const double a = std::min(lo, hi);
  const double b = std::max(lo, hi);
  if (model.kind() == FamilyKind::kBernoulli && a <= 0.5 && 0.5 <= b) best = std::max(best, 0.25);
  return best;
}

BanditInstance::BanditInstance(ExpFamilyModel model, std::vector<double> means,
                               double variance_cap)
    : model_(model), means_(std::move(means)), variance_cap_(variance_cap), best_mean_(0.0) {
  if (means_.empty()) throw std::invalid_argument("bandit instance needs at least one arm");
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (!model_.support().contains(means_[i])) {
      throw std::invalid_argument("means[" + std::to_string(i) + "] = " +
                                  format_double(means_[i]) + " is outside the support of " +
                                  model_.tag());
    }
  }
  const auto [lo, hi] = std::minmax_element(means_.begin(), means_.end());
  best_mean_ = *hi;
  const double needed = max_variance_on(model_, *lo, *hi);
  if (!(variance_cap_ >= needed) || !std::isfinite(variance_cap_)) {
    throw std::invalid_argument("variance_cap = " + format_double(variance_cap_) +
                                " is below the maximum variance " + format_double(needed) +
                                " over the arm means");
  }
}

BanditInstance BanditInstance::with_default_cap(ExpFamilyModel model, std::vector<double> means) {
  if (means.empty()) throw std::invalid_argument("bandit instance needs at least one arm");
  const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
  for (double m : means) require_interior(model, m, "mean");
  const double cap = max_variance_on(model, *lo, *hi);
  return BanditInstance(model, std::move(means), cap);
}

double BanditInstance::best_mean() const { return best_mean_; }

std::vector<double> BanditInstance::gaps() const {
  std::vector<double> out(means_.size());
  std::transform(means_.begin(), means_.end(), out.begin(),
                 [&](double m) { return best_mean_ - m; });
  return out;
}

double BanditInstance::asymptotic_constant() const {
  double total = 0.0;
  for (double m : means_) {
    if (m < best_mean_) total += (best_mean_ - m) / kl_divergence(model_, m, best_mean_);
  }
  return total;
}

}  // namespace expts
