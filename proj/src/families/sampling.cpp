#include <cmath>

#include "expfam/errors.hpp"
#include "expfam/families.hpp"

namespace expfam::families {

double sample_inverse_gaussian(const InverseGaussianDist& dist, numerics::RandomStream& rng) {
  // Michael, Schucany and Haas transformation with one acceptance coin.
  const double mu = dist.mean;
  const double lambda = dist.shape;
  const double nu = rng.normal();
  const double y = nu * nu;
  const double x = mu + mu * mu * y / (2.0 * lambda) -
                   mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
  return rng.uniform() <= mu / (mu + x) ? x : mu * mu / x;
}

double sample_poisson_exponential(const PoissonExponentialDist& dist, numerics::RandomStream& rng) {
  const std::uint64_t count = rng.poisson(dist.lambda());
  if (count == 0) return 0.0;
  return rng.gamma(static_cast<double>(count), dist.rate);
}

Vector sample(const Family& fam, const NaturalParam& theta, numerics::RandomStream& rng) {
  if (!in_natural_domain(fam, theta)) throw DomainError("sample: theta outside the natural domain");
  switch (fam.kind()) {
    case FamilyKind::Gamma:
      return point(rng.gamma(fam.shape(), -theta.scalar()));
    case FamilyKind::GaussianLocation: {
      const Matrix& b = fam.cov();
      Vector z(b.rows());
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
      const Matrix l = b.llt().matrixL();
      return b * theta.theta() + l * z;
    }
    case FamilyKind::InverseGaussian:
      return point(sample_inverse_gaussian(
          InverseGaussianDist(mean_from_natural(fam, theta).scalar(), fam.shape()), rng));
    case FamilyKind::PoissonExponential:
      return point(sample_poisson_exponential(PoissonExponentialDist(fam.shape(), -theta.scalar()), rng));
  }
  throw DomainError("sample: unknown family");
}

}  // namespace expfam::families
