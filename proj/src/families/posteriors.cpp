#include <cmath>

#include "expfam/errors.hpp"
#include "expfam/families.hpp"

namespace expfam::families {

GammaPosterior gamma_posterior(double alpha, const ObservationBatch& batch) {
  if (!(alpha > 0.0)) throw DomainError("gamma_posterior: alpha must be positive");
  const double xbar = batch.xbar_scalar();
  if (!(xbar > 0.0) || !std::isfinite(xbar)) throw DomainError("gamma_posterior: xbar must be positive");
  const double m = static_cast<double>(batch.n);
  return GammaPosterior(m * alpha, m * xbar);
}

InverseGaussianDist poisson_exponential_posterior(double kappa, const ObservationBatch& batch) {
  if (!(kappa > 0.0)) throw DomainError("poisson_exponential_posterior: kappa must be positive");
  const double xbar = batch.xbar_scalar();
  if (xbar == 0.0) {
    throw DegenerateData("poisson_exponential_posterior: every observation is 0");
  }
  if (!(xbar > 0.0) || !std::isfinite(xbar)) {
    throw DomainError("poisson_exponential_posterior: xbar must be positive");
  }
  const double m = static_cast<double>(batch.n);
  return InverseGaussianDist(std::sqrt(kappa / (2.0 * xbar)), m * kappa);
}

}  // namespace expfam::families
