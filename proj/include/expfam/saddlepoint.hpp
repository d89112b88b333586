#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "expfam/core.hpp"

namespace expfam::saddlepoint {

/// exp(-n D_A(theta, theta_hat)) |Cov(mu_theta)|^{1/2} / tau^{d/2}, in log form.
double saddlepoint_log_unnormalized(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                    const NaturalParam& theta);
double saddlepoint_unnormalized(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                const NaturalParam& theta);

/// The saddle-point form divided by its integral over Theta.
struct SaddlepointProfile {
  Family fam;
  std::size_t n;
  NaturalParam theta_hat;
  double log_normalizer;
  double normalizer;
  double normalizer_error;  // relative
  std::size_t evaluations;

  double log_density(const NaturalParam& theta) const;
  double density(const NaturalParam& theta) const;
};

/// Integrates the saddle-point form over Theta with relative tolerance `tol`.
/// Windows around theta_hat grow until the tails are negligible (NonIntegrable
/// otherwise). The Gaussian family with d > 1 uses a product rule.
SaddlepointProfile renormalize(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                               double tol = 1e-10);

/// Log density, in theta, of the exact Jeffreys posterior after n observations
/// with MLE theta_hat when it is a member of the conjugated family:
///   Gamma             beta = -theta ~ Gamma(n alpha, n xbar)
///   Gaussian          B theta ~ N(xbar, B / n)
///   PoissonExp        beta = -theta ~ IG(sqrt(kappa / (2 xbar)), n kappa)
/// DomainError for the inverse Gaussian family, whose posterior is not.
double conjugated_posterior_log_density(const Family& fam, std::size_t n,
                                        const NaturalParam& theta_hat, const NaturalParam& theta);

struct ExactnessReport {
  double max_relative_deviation;
  double normalizer_error;
  std::vector<NaturalParam> grid;
  std::vector<double> deviations;
};

/// max over the grid of |profile(theta) - exact(theta)| / exact(theta).
ExactnessReport exactness_report(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                 std::span<const NaturalParam> grid, double tol = 1e-10);
ExactnessReport exactness_report(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                 double tol = 1e-10);

/// Points spread over +-2.5 approximate posterior standard deviations around
/// theta_hat (log-spaced in the rate for the half-line families; for d > 1 the
/// offsets run along each coordinate axis).
std::vector<NaturalParam> default_grid(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                       int points = 11);

}  // namespace expfam::saddlepoint
