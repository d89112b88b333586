#pragma once

#include <span>

#include "expfam/core.hpp"
#include "expfam/numerics/random.hpp"

namespace expfam::families {

/// A family and its conjugated exponential family, the one whose sufficient
/// statistic is theta and whose cumulant is A*. The relation is
///   A*(x) = A_dual(sign * x) + offset
/// where sign = -1 maps the mean domain (0, inf) onto the negative natural
/// domain of the dual.
struct ConjugatePair {
  Family primal;
  Family dual;
  bool self_conjugate = false;
  double sign = 1.0;
  double offset = 0.0;
};

/// Gamma(a) -> Gamma(a); Gaussian(B) -> Gaussian(B^{-1});
/// InverseGaussian(k) <-> PoissonExponential(k).
ConjugatePair conjugate_family(const Family& fam);

/// The family whose cumulant is h A: the law of the sum of h iid draws.
/// Gamma(h alpha), Gaussian(h B), InverseGaussian(h^2 kappa),
/// PoissonExponential(h kappa).
Family convolution_power(const Family& fam, std::size_t h);

/// Gamma density with shape alpha and rate beta. SupportError for x <= 0.
double gamma_density(double alpha, double beta, double x);
double gamma_log_density(double alpha, double beta, double x);

struct GammaPosterior {
  GammaPosterior(double shape, double rate);

  double shape;
  double rate;

  double log_density(double beta) const;
  double density(double beta) const;
  double cdf(double beta) const;
  double quantile(double p) const;
  double mean() const { return shape / rate; }
};

/// Inverse Gaussian law of a positive rate beta with mean beta0 and shape kappa.
struct InverseGaussianDist {
  InverseGaussianDist(double mean, double shape);

  double mean;
  double shape;
};

double inverse_gaussian_log_density(const InverseGaussianDist& dist, double beta);
double inverse_gaussian_density(const InverseGaussianDist& dist, double beta);
/// Phi(a (b/m - 1)) + exp(2 k/m) Phi(-a (b/m + 1)) with a = sqrt(k/b); the
/// second term is combined in log space.
double inverse_gaussian_cdf(const InverseGaussianDist& dist, double beta);
double inverse_gaussian_quantile(const InverseGaussianDist& dist, double p, double tol = 1e-14);

/// Compound Poisson sum of Exp(rate) variables with Poisson count of mean
/// lambda = kappa / (2 rate).
struct PoissonExponentialDist {
  PoissonExponentialDist(double kappa, double rate);

  double kappa;
  double rate;

  double lambda() const { return kappa / (2.0 * rate); }
  double atom_weight() const;
  double mean() const { return kappa / (2.0 * rate * rate); }
};

struct PoissonExponentialPoint {
  double atom;     // mass at 0
  double density;  // continuous density at x (0 when x == 0)
};

PoissonExponentialPoint poisson_exponential_density(const PoissonExponentialDist& dist, double x);
double poisson_exponential_log_density(const PoissonExponentialDist& dist, double x);
/// atom + sum_k Poisson(k; lambda) P(k, rate x).
double poisson_exponential_cdf(const PoissonExponentialDist& dist, double x);

/// 2^{3/2} kappa^{-1/2}.
double tweedie_dispersion(double kappa);
/// Variance of the Poisson-exponential family at mean mu: phi mu^{3/2}
/// with phi = tweedie_dispersion(kappa).
double tweedie_variance_function(double kappa, double mu);
/// Same variance written in the natural parameter of the inverse Gaussian
/// side: phi (-theta)^{3/2}, theta < 0.
double tweedie_variance_natural(double kappa, double theta);

/// Jeffreys posterior of the Gamma rate: Gamma(m alpha, m xbar).
GammaPosterior gamma_posterior(double alpha, const ObservationBatch& batch);

/// Jeffreys posterior of the Poisson-exponential rate:
/// IG(beta0 = sqrt(kappa / (2 xbar)), m kappa). DegenerateData when xbar == 0.
InverseGaussianDist poisson_exponential_posterior(double kappa, const ObservationBatch& batch);

/// max over the grid of |A*(x) - A(B^{-1} x)| with A* from the generic
/// convex_conjugate. Uses the Gaussian family's own covariance.
double self_conjugacy_defect(const Family& fam, std::span<const Vector> grid);
/// Same defect for an arbitrary family and positive definite B. Returns +inf
/// when B^{-1} x leaves the natural domain for some grid point.
double self_conjugacy_defect(const Family& fam, const Matrix& b, std::span<const Vector> grid);

/// One observation from p_theta.
Vector sample(const Family& fam, const NaturalParam& theta, numerics::RandomStream& rng);
double sample_inverse_gaussian(const InverseGaussianDist& dist, numerics::RandomStream& rng);
double sample_poisson_exponential(const PoissonExponentialDist& dist, numerics::RandomStream& rng);

}  // namespace expfam::families
