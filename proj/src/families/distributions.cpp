#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "expfam/errors.hpp"
#include "expfam/families.hpp"
#include "expfam/numerics/roots.hpp"
#include "expfam/numerics/special_functions.hpp"

namespace expfam::families {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(what) + ": p must lie in (0, 1)");
}

}  // namespace

double gamma_log_density(double alpha, double beta, double x) {
  require_positive(alpha, "gamma_density: alpha");
  require_positive(beta, "gamma_density: beta");
  if (!(x > 0.0) || !std::isfinite(x)) throw SupportError("gamma_density: x must be positive");
  return alpha * std::log(beta) + (alpha - 1.0) * std::log(x) - beta * x -
         numerics::log_gamma(alpha);
}

double gamma_density(double alpha, double beta, double x) {
  return std::exp(gamma_log_density(alpha, beta, x));
}

GammaPosterior::GammaPosterior(double shape_, double rate_) : shape(shape_), rate(rate_) {
  require_positive(shape, "GammaPosterior shape");
  require_positive(rate, "GammaPosterior rate");
}

double GammaPosterior::log_density(double beta) const { return gamma_log_density(shape, rate, beta); }

double GammaPosterior::density(double beta) const { return gamma_density(shape, rate, beta); }

double GammaPosterior::cdf(double beta) const {
  if (!(beta > 0.0)) return 0.0;
  return numerics::reg_gamma_lower(shape, rate * beta);
}

double GammaPosterior::quantile(double p) const {
  require_probability(p, "GammaPosterior::quantile");
  return numerics::inv_reg_gamma_lower(shape, p) / rate;
}

InverseGaussianDist::InverseGaussianDist(double mean_, double shape_) : mean(mean_), shape(shape_) {
  require_positive(mean, "inverse Gaussian mean");
  require_positive(shape, "inverse Gaussian shape");
}

double inverse_gaussian_log_density(const InverseGaussianDist& dist, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw SupportError("inverse_gaussian_density: beta must be positive");
  }
  const double d = beta - dist.mean;
  return 0.5 * std::log(dist.shape / (tau * beta * beta * beta)) -
         dist.shape * d * d / (2.0 * dist.mean * dist.mean * beta);
}

double inverse_gaussian_density(const InverseGaussianDist& dist, double beta) {
  return std::exp(inverse_gaussian_log_density(dist, beta));
}

double inverse_gaussian_cdf(const InverseGaussianDist& dist, double beta) {
  if (!(beta > 0.0)) return 0.0;
  if (beta == std::numeric_limits<double>::infinity()) return 1.0;
  const double a = std::sqrt(dist.shape / beta);
  const double r = beta / dist.mean;
  const double first = numerics::std_normal_cdf(a * (r - 1.0));
  const double second =
      std::exp(2.0 * dist.shape / dist.mean + numerics::log_std_normal_cdf(-a * (r + 1.0)));
  return std::min(1.0, first + second);
}

double inverse_gaussian_quantile(const InverseGaussianDist& dist, double p, double tol) {
  require_probability(p, "inverse_gaussian_quantile");
  // Solve in log(beta): the cdf is smooth there and the relative accuracy is uniform.
  auto g = [&](double u) { return inverse_gaussian_cdf(dist, std::exp(u)) - p; };
  const double center = std::log(dist.mean);
  const double inf = std::numeric_limits<double>::infinity();
  const numerics::Bracket bracket = numerics::expand_bracket(g, center - 1.0, center + 1.0, -inf, inf);
  return std::exp(numerics::find_root(g, bracket, tol));
}

PoissonExponentialDist::PoissonExponentialDist(double kappa_, double rate_)
    : kappa(kappa_), rate(rate_) {
  require_positive(kappa, "Poisson-exponential kappa");
  require_positive(rate, "Poisson-exponential rate");
}

double PoissonExponentialDist::atom_weight() const { return std::exp(-lambda()); }

double poisson_exponential_log_density(const PoissonExponentialDist& dist, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw SupportError("poisson_exponential_log_density: x must be positive");
  }
  return log_poisson_exponential_series(dist.kappa, x) - dist.rate * x - dist.lambda();
}

PoissonExponentialPoint poisson_exponential_density(const PoissonExponentialDist& dist, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw SupportError("poisson_exponential_density: x must be nonnegative");
  }
  const double atom = dist.atom_weight();
  if (x == 0.0) return {atom, 0.0};
  // The series is sqrt(z) I_1(2 sqrt(z)) / x with z = kappa x / 2, and
  // I_1(t) <= e^t. Skip the series where even that bound underflows.
  const double z = 0.5 * dist.kappa * x;
  if (0.5 * std::log(z) + 2.0 * std::sqrt(z) - std::log(x) - dist.rate * x - dist.lambda() < -760.0) {
    return {atom, 0.0};
  }
  return {atom, std::exp(poisson_exponential_log_density(dist, x))};
}

double poisson_exponential_cdf(const PoissonExponentialDist& dist, double x) {
  if (x < 0.0) return 0.0;
  const double lambda = dist.lambda();
  double total = dist.atom_weight();
  if (x == 0.0) return total;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  // Poisson weights outside lambda -/+ (12 sqrt(lambda) + 30) are below 1e-30.
  const double spread = 12.0 * std::sqrt(lambda) + 30.0;
  const int k_lo = std::max(1, static_cast<int>(std::floor(lambda - spread)));
  const int k_hi = static_cast<int>(std::ceil(lambda + spread));
  const double y = dist.rate * x;
  const double log_lambda = std::log(lambda);
  const double log_y = std::log(y);
  // P(k + 1, y) = P(k, y) - y^k e^{-y} / k!.
  double p = numerics::reg_gamma_lower(k_lo, y);
  double log_fact = std::lgamma(k_lo + 1.0);  // log k!
  for (int k = k_lo; k <= k_hi; ++k) {
    total += std::exp(k * log_lambda - lambda - log_fact) * p;
    p = std::max(0.0, p - std::exp(k * log_y - y - log_fact));
    log_fact += std::log(k + 1.0);
  }
  return std::min(1.0, total);
}

double tweedie_dispersion(double kappa) {
  require_positive(kappa, "tweedie_dispersion: kappa");
  return std::pow(2.0, 1.5) / std::sqrt(kappa);
}

double tweedie_variance_function(double kappa, double mu) {
  require_positive(mu, "tweedie_variance_function: mean");
  return tweedie_dispersion(kappa) * std::pow(mu, 1.5);
}

double tweedie_variance_natural(double kappa, double theta) {
  if (!(theta < 0.0) || !std::isfinite(theta)) {
    throw DomainError("tweedie_variance_natural: theta must be negative");
  }
  return tweedie_dispersion(kappa) * std::pow(-theta, 1.5);
}

}  // namespace expfam::families
