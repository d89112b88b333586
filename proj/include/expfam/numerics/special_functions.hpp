#pragma once

namespace expfam::numerics {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
double reg_gamma_lower(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), accurate in the
/// upper tail.
double reg_gamma_upper(double a, double x);

/// Solves P(a, x) = p for x, with a > 0 and 0 < p < 1.
double inv_reg_gamma_lower(double a, double p);

/// Standard normal distribution function.
double std_normal_cdf(double z);

/// ln Phi(z), finite far into the lower tail where Phi(z) underflows.
double log_std_normal_cdf(double z);

/// Inverse of the standard normal distribution function on (0, 1).
double std_normal_quantile(double p);

/// Standard normal density.
double std_normal_pdf(double z);

}  // namespace expfam::numerics
