#include "expfam/numerics/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "expfam/errors.hpp"

namespace expfam::numerics {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

double log_gamma(double x) {
  require(x > 0.0 && std::isfinite(x), "log_gamma: x must be positive and finite");
  return std::lgamma(x);
}

double reg_gamma_lower(double a, double x) {
  require(a > 0.0 && std::isfinite(a), "reg_gamma_lower: a must be positive");
  require(x >= 0.0, "reg_gamma_lower: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  try {
    return boost::math::gamma_p(a, x);
  } catch (const std::overflow_error&) {
    // Far left tail (x << a): x^a e^{-x} / Gamma(a + 1) * sum_j x^j / ((a+1)...(a+j)).
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < 1000 && term > 1e-17 * sum; ++j) {
      term *= x / (a + j);
      sum += term;
    }
    return std::exp(a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum));
  }
}

double reg_gamma_upper(double a, double x) {
  require(a > 0.0 && std::isfinite(a), "reg_gamma_upper: a must be positive");
  require(x >= 0.0, "reg_gamma_upper: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(a, x);
}

double inv_reg_gamma_lower(double a, double p) {
  require(a > 0.0 && std::isfinite(a), "inv_reg_gamma_lower: a must be positive");
  require(p > 0.0 && p < 1.0, "inv_reg_gamma_lower: p must lie in (0, 1)");
  try {
    return boost::math::gamma_p_inv(a, p);
  } catch (const std::exception& e) {
    throw NonConvergence(std::string("inv_reg_gamma_lower: ") + e.what());
  }
}

double std_normal_cdf(double z) {
  if (std::isnan(z)) throw DomainError("std_normal_cdf: z is NaN");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double log_std_normal_cdf(double z) {
  if (std::isnan(z)) throw DomainError("log_std_normal_cdf: z is NaN");
  if (z > -30.0) return std::log(std_normal_cdf(z));
  // Asymptotic Mills-ratio expansion; the first omitted term is below 1e-14
  // relative for z < -30.
  const double w = 1.0 / (z * z);
  double series = 1.0;
  double term = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * w;
    series += term;
  }
  return -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log(series);
}

double std_normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "std_normal_quantile: p must lie in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double std_normal_pdf(double z) {
  static const double inv_sqrt_tau = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return inv_sqrt_tau * std::exp(-0.5 * z * z);
}

}  // namespace expfam::numerics
