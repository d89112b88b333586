#include <cmath>
#include <limits>

#include "expfam/errors.hpp"
#include "expfam/families.hpp"

namespace expfam::families {

ConjugatePair conjugate_family(const Family& fam) {
  switch (fam.kind()) {
    case FamilyKind::Gamma: {
      const double a = fam.shape();
      return {fam, fam, true, -1.0, -a + a * std::log(a)};
    }
    case FamilyKind::GaussianLocation:
      return {fam, Family::gaussian(fam.cov_inverse()), true, 1.0, 0.0};
    case FamilyKind::InverseGaussian:
      return {fam, Family::poisson_exponential(fam.shape()), false, -1.0, 0.0};
    case FamilyKind::PoissonExponential:
      return {fam, Family::inverse_gaussian(fam.shape()), false, -1.0, 0.0};
  }
  throw DomainError("conjugate_family: unknown family");
}

Family convolution_power(const Family& fam, std::size_t h) {
  if (h == 0) throw DomainError("convolution_power: h must be at least 1");
  const double k = static_cast<double>(h);
  switch (fam.kind()) {
    case FamilyKind::Gamma:
      return Family::gamma(k * fam.shape());
    case FamilyKind::GaussianLocation:
      return Family::gaussian(Matrix(k * fam.cov()));
    case FamilyKind::InverseGaussian:
      return Family::inverse_gaussian(k * k * fam.shape());
    case FamilyKind::PoissonExponential:
      return Family::poisson_exponential(k * fam.shape());
  }
  throw DomainError("convolution_power: unknown family");
}

double self_conjugacy_defect(const Family& fam, std::span<const Vector> grid) {
  return self_conjugacy_defect(fam, fam.cov(), grid);
}

double self_conjugacy_defect(const Family& fam, const Matrix& b, std::span<const Vector> grid) {
  if (b.rows() != fam.dimension() || b.cols() != fam.dimension()) {
    throw DomainError("self_conjugacy_defect: B has the wrong dimension");
  }
  const Eigen::LLT<Matrix> llt(b);
  if (llt.info() != Eigen::Success) {
    throw DomainError("self_conjugacy_defect: B must be positive definite");
  }
  double defect = 0.0;
  for (const Vector& x : grid) {
    const NaturalParam image(Vector(llt.solve(x)));
    // Outside either domain one side is +inf (or undefined) while the other is finite.
    if (!in_natural_domain(fam, image) || !in_mean_domain(fam, x)) {
      return std::numeric_limits<double>::infinity();
    }
    const double lhs = convex_conjugate(fam, MeanParam(x));
    defect = std::max(defect, std::abs(lhs - cumulant(fam, image)));
  }
  return defect;
}

}  // namespace expfam::families
