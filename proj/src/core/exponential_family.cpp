#include <cmath>
#include <limits>
#include <string>

#include "expfam/core.hpp"
#include "expfam/errors.hpp"
#include "expfam/numerics/roots.hpp"
#include "expfam/numerics/special_functions.hpp"

namespace expfam {

namespace {

void check_dimension(const Family& fam, Eigen::Index size, const char* what) {
  if (size != fam.dimension()) {
    throw DomainError(std::string(what) + ": dimension mismatch for " + fam.name());
  }
}

void require_natural(const Family& fam, const NaturalParam& theta) {
  check_dimension(fam, theta.size(), "natural parameter");
  if (!in_natural_domain(fam, theta)) {
    throw DomainError("natural parameter outside the natural domain of " + fam.name());
  }
}

void require_mean(const Family& fam, const Vector& x) {
  check_dimension(fam, x.size(), "mean parameter");
  if (!in_mean_domain(fam, x)) {
    throw DomainError("point outside the open mean domain of " + fam.name());
  }
}

}  // namespace

bool in_natural_domain(const Family& fam, const NaturalParam& theta) {
  if (theta.size() != fam.dimension() || !theta.theta().allFinite()) return false;
  if (fam.kind() == FamilyKind::GaussianLocation) return true;
  return theta.scalar() < 0.0;
}

bool in_mean_domain(const Family& fam, const Vector& x) {
  if (x.size() != fam.dimension() || !x.allFinite()) return false;
  if (fam.kind() == FamilyKind::GaussianLocation) return true;
  return x(0) > 0.0;
}

bool in_support(const Family& fam, const Vector& x) {
  if (x.size() != fam.dimension() || !x.allFinite()) return false;
  switch (fam.kind()) {
    case FamilyKind::GaussianLocation:
      return true;
    case FamilyKind::PoissonExponential:
      return x(0) >= 0.0;
    default:
      return x(0) > 0.0;
  }
}

double cumulant(const Family& fam, const NaturalParam& theta) {
  require_natural(fam, theta);
  switch (fam.kind()) {
    case FamilyKind::Gamma:
      return -fam.shape() * std::log(-theta.scalar());
    case FamilyKind::GaussianLocation:
      return 0.5 * theta.theta().dot(fam.cov() * theta.theta());
    case FamilyKind::InverseGaussian:
      return -std::sqrt(-2.0 * fam.shape() * theta.scalar());
    case FamilyKind::PoissonExponential:
      return fam.shape() / (2.0 * -theta.scalar());
  }
  return 0.0;
}

MeanParam mean_from_natural(const Family& fam, const NaturalParam& theta) {
  require_natural(fam, theta);
  switch (fam.kind()) {
    case FamilyKind::Gamma:
      return MeanParam(-fam.shape() / theta.scalar());
    case FamilyKind::GaussianLocation:
      return MeanParam(Vector(fam.cov() * theta.theta()));
    case FamilyKind::InverseGaussian:
      return MeanParam(std::sqrt(fam.shape() / (-2.0 * theta.scalar())));
    case FamilyKind::PoissonExponential: {
      const double t = theta.scalar();
      return MeanParam(fam.shape() / (2.0 * t * t));
    }
  }
  return MeanParam(0.0);
}

Matrix covariance(const Family& fam, const NaturalParam& theta) {
  require_natural(fam, theta);
  const double t = fam.kind() == FamilyKind::GaussianLocation ? 0.0 : theta.scalar();
  switch (fam.kind()) {
    case FamilyKind::Gamma:
      return Matrix::Constant(1, 1, fam.shape() / (t * t));
    case FamilyKind::GaussianLocation:
      return fam.cov();
    case FamilyKind::InverseGaussian:
      return Matrix::Constant(1, 1, 0.5 * std::sqrt(0.5 * fam.shape()) * std::pow(-t, -1.5));
    case FamilyKind::PoissonExponential:
      return Matrix::Constant(1, 1, fam.shape() / (-t * t * t));
  }
  return {};
}

NaturalParam mle(const Family& fam, const MeanParam& xbar) {
  require_mean(fam, xbar.mu());
  switch (fam.kind()) {
    case FamilyKind::Gamma:
      return NaturalParam(-fam.shape() / xbar.scalar());
    case FamilyKind::GaussianLocation:
      return NaturalParam(Vector(fam.cov_inverse() * xbar.mu()));
    case FamilyKind::InverseGaussian: {
      const double x = xbar.scalar();
      return NaturalParam(-fam.shape() / (2.0 * x * x));
    }
    case FamilyKind::PoissonExponential:
      return NaturalParam(-std::sqrt(fam.shape() / (2.0 * xbar.scalar())));
  }
  return NaturalParam(0.0);
}

NaturalParam mle_numeric(const Family& fam, const MeanParam& xbar, double tol) {
  require_mean(fam, xbar.mu());
  if (fam.kind() == FamilyKind::GaussianLocation) {
    if (fam.dimension() > 1) return NaturalParam(Vector(fam.cov().fullPivLu().solve(xbar.mu())));
    const double b = fam.cov()(0, 0);
    const double x = xbar.scalar();
    auto g = [&](double t) { return b * t - x; };
    const double span = std::abs(x / b) + 1.0;
    return NaturalParam(numerics::find_root(g, numerics::Bracket(-span, span), tol));
  }
  // The mean map is increasing in theta; search over rate = -theta > 0.
  const double x = xbar.scalar();
  auto g = [&](double rate) { return mean_from_natural(fam, NaturalParam(-rate)).scalar() - x; };
  const numerics::Bracket bracket =
      numerics::expand_bracket(g, 0.5, 2.0, 0.0, std::numeric_limits<double>::infinity());
  const double rate = numerics::find_root(g, bracket, tol);
  return NaturalParam(-rate);
}

// Closed forms written so that nothing cancels when A is large or theta2 is
// close to theta1.
double bregman(const Family& fam, const NaturalParam& theta2, const NaturalParam& theta1) {
  require_natural(fam, theta2);
  require_natural(fam, theta1);
  switch (fam.kind()) {
    case FamilyKind::GaussianLocation: {
      const Vector diff = theta2.theta() - theta1.theta();
      return 0.5 * diff.dot(fam.cov() * diff);
    }
    case FamilyKind::Gamma: {
      // alpha (r - 1 - ln r) with r = theta2 / theta1.
      const double q = theta2.scalar() / theta1.scalar() - 1.0;
      return std::max(0.0, fam.shape() * (q - std::log1p(q)));
    }
    case FamilyKind::InverseGaussian: {
      // sqrt(kappa / 2) (u2 - u1)^2 / u1 with u = sqrt(-theta).
      const double u1 = std::sqrt(-theta1.scalar());
      const double u2 = std::sqrt(-theta2.scalar());
      return std::sqrt(0.5 * fam.shape()) * (u2 - u1) * (u2 - u1) / u1;
    }
    case FamilyKind::PoissonExponential: {
      // kappa (b1 - b2)^2 / (2 b2 b1^2) with b = -theta.
      const double b1 = -theta1.scalar();
      const double b2 = -theta2.scalar();
      return fam.shape() * (b1 - b2) * (b1 - b2) / (2.0 * b2 * b1 * b1);
    }
  }
  throw DomainError("bregman: unknown family");
}

double kl_divergence(const Family& fam, const NaturalParam& theta1, const NaturalParam& theta2) {
  return bregman(fam, theta2, theta1);
}

double convex_conjugate(const Family& fam, const MeanParam& x) {
  const NaturalParam hat = mle(fam, x);
  return hat.theta().dot(x.mu()) - cumulant(fam, hat);
}

double log_jeffreys(const Family& fam, const NaturalParam& theta) {
  if (fam.kind() == FamilyKind::GaussianLocation) {
    require_natural(fam, theta);
    return 0.5 * fam.log_det_cov();
  }
  return 0.5 * std::log(covariance(fam, theta)(0, 0));
}

double jeffreys_unnormalized(const Family& fam, const NaturalParam& theta) {
  return std::exp(log_jeffreys(fam, theta));
}

double log_poisson_exponential_series(double kappa, double x) {
  if (!(kappa > 0.0)) throw DomainError("Poisson-exponential series: kappa must be positive");
  if (!(x > 0.0) || !std::isfinite(x)) throw SupportError("Poisson-exponential series: x must be positive");
  const double z = 0.5 * kappa * x;
  if (z > 1e8) {
    // The sum is sqrt(z) I_1(t) / x with t = 2 sqrt(z); Hankel expansion of
    // I_1, next term below 1e-13 relative here.
    const double t = 2.0 * std::sqrt(z);
    const double tail = 1.0 - 0.375 / t - 0.1171875 / (t * t) - 0.1025390625 / (t * t * t);
    return 0.5 * std::log(z) - std::log(x) + t - 0.5 * std::log(tau * t) + std::log(tail);
  }
  // Term k is z^k / (x k! (k-1)!); successive ratio z / (k (k+1)).
  const double peak = std::max(1.0, std::floor(std::sqrt(z)));
  const double log_peak = peak * std::log(z) - std::log(x) - std::lgamma(peak + 1.0) -
                          std::lgamma(peak);
  constexpr double cutoff = 1e-17;
  double sum = 1.0;
  double term = 1.0;
  int count = 1;
  for (double k = peak; count < 100000; k += 1.0) {
    term *= z / (k * (k + 1.0));
    sum += term;
    ++count;
    if (term < cutoff * sum && count >= 5) break;
  }
  term = 1.0;
  for (double k = peak; k > 1.0; k -= 1.0) {
    term *= (k - 1.0) * k / z;
    sum += term;
    if (term < cutoff * sum) break;
  }
  return log_peak + std::log(sum);
}

double log_carrier(const Family& fam, const Vector& x) {
  check_dimension(fam, x.size(), "observation");
  if (!in_support(fam, x)) throw SupportError("observation outside the support of " + fam.name());
  switch (fam.kind()) {
    case FamilyKind::Gamma: {
      const double alpha = fam.shape();
      return (alpha - 1.0) * std::log(x(0)) - numerics::log_gamma(alpha);
    }
    case FamilyKind::GaussianLocation:
      return -0.5 * x.dot(fam.cov_inverse() * x) - 0.5 * fam.dimension() * std::log(tau) -
             0.5 * fam.log_det_cov();
    case FamilyKind::InverseGaussian: {
      const double kappa = fam.shape();
      const double v = x(0);
      return 0.5 * std::log(kappa / (tau * v * v * v)) - kappa / (2.0 * v);
    }
    case FamilyKind::PoissonExponential:
      if (x(0) == 0.0) return 0.0;
      return log_poisson_exponential_series(fam.shape(), x(0));
  }
  return 0.0;
}

double log_density(const Family& fam, const NaturalParam& theta, const Vector& x) {
  const double lc = log_carrier(fam, x);
  return theta.theta().dot(x) - cumulant(fam, theta) + lc;
}

double density(const Family& fam, const NaturalParam& theta, const Vector& x) {
  return std::exp(log_density(fam, theta, x));
}

double robustness_ratio(const Family& fam, const NaturalParam& theta, const Vector& x) {
  const NaturalParam hat = mle(fam, MeanParam(x));
  return std::exp(-bregman(fam, theta, hat));
}

}  // namespace expfam
