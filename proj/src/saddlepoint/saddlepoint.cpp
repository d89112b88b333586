#include "expfam/saddlepoint.hpp"

#include <cmath>
#include <limits>

#include "expfam/errors.hpp"
#include "expfam/families.hpp"
#include "expfam/numerics/quadrature.hpp"

namespace expfam::saddlepoint {

namespace {

void require_n(std::size_t n) {
  if (n == 0) throw DomainError("saddlepoint: n must be at least 1");
}

// Rough posterior standard deviation of each theta coordinate.
Vector theta_scales(const Family& fam, std::size_t n, const NaturalParam& theta_hat) {
  const Matrix cov = covariance(fam, theta_hat);
  return (static_cast<double>(n) * cov.diagonal()).cwiseSqrt().cwiseInverse();
}

}  // namespace

double saddlepoint_log_unnormalized(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                    const NaturalParam& theta) {
  require_n(n);
  return -static_cast<double>(n) * bregman(fam, theta, theta_hat) + log_jeffreys(fam, theta) -
         0.5 * fam.dimension() * std::log(tau);
}

double saddlepoint_unnormalized(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                const NaturalParam& theta) {
  return std::exp(saddlepoint_log_unnormalized(fam, n, theta_hat, theta));
}

double SaddlepointProfile::log_density(const NaturalParam& theta) const {
  if (!in_natural_domain(fam, theta)) return -std::numeric_limits<double>::infinity();
  return saddlepoint_log_unnormalized(fam, n, theta_hat, theta) - log_normalizer;
}

double SaddlepointProfile::density(const NaturalParam& theta) const {
  return std::exp(log_density(theta));
}

SaddlepointProfile renormalize(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                               double tol) {
  require_n(n);
  if (!(tol > 0.0)) throw DomainError("renormalize: tol must be positive");
  if (!in_natural_domain(fam, theta_hat)) throw DomainError("renormalize: theta_hat outside Theta");

  numerics::LogQuadratureResult r;
  if (fam.dimension() > 1) {
    const Vector scales = theta_scales(fam, n, theta_hat);
    const Vector center = theta_hat.theta();
    r = numerics::integrate_log_box(
        [&](std::span<const double> t) {
          const Vector theta = Eigen::Map<const Vector>(t.data(), static_cast<Eigen::Index>(t.size()));
          return saddlepoint_log_unnormalized(fam, n, theta_hat, NaturalParam(theta));
        },
        std::span<const double>(center.data(), static_cast<std::size_t>(center.size())),
        std::span<const double>(scales.data(), static_cast<std::size_t>(scales.size())),
        {.abs_tol = 0.0, .rel_tol = tol});
  } else {
    const double c = theta_hat.scalar();
    const numerics::Domain domain = fam.kind() == FamilyKind::GaussianLocation
                                        ? numerics::Domain::real_line(c, theta_scales(fam, n, theta_hat)(0))
                                        : numerics::Domain::negative_half_line(0.0);
    numerics::WindowOptions opts;
    opts.quadrature.abs_tol = 0.0;
    opts.quadrature.rel_tol = tol;
    r = numerics::integrate_log_windows(
        [&](double t) { return saddlepoint_log_unnormalized(fam, n, theta_hat, NaturalParam(t)); },
        domain, c, opts);
  }
  if (r.relative_error > tol) {
    throw NonConvergence("renormalize: normalizer error above tolerance", std::exp(r.log_value),
                         r.relative_error, r.evaluations);
  }
  return SaddlepointProfile{fam,         n, theta_hat, r.log_value, std::exp(r.log_value),
                            r.relative_error, r.evaluations};
}

double conjugated_posterior_log_density(const Family& fam, std::size_t n,
                                        const NaturalParam& theta_hat, const NaturalParam& theta) {
  require_n(n);
  const Vector xbar = mean_from_natural(fam, theta_hat).mu();
  const ObservationBatch summary = ObservationBatch::summary(n, xbar);
  switch (fam.kind()) {
    case FamilyKind::Gamma: {
      if (!(theta.scalar() < 0.0)) return -std::numeric_limits<double>::infinity();
      return families::gamma_posterior(fam.shape(), summary).log_density(-theta.scalar());
    }
    case FamilyKind::GaussianLocation: {
      // mu = B theta ~ N(xbar, B / n); the change of variables contributes |B|.
      const double nn = static_cast<double>(n);
      const Vector r = fam.cov() * theta.theta() - xbar;
      const int d = fam.dimension();
      return fam.log_det_cov() - 0.5 * d * std::log(tau) - 0.5 * (fam.log_det_cov() - d * std::log(nn)) -
             0.5 * nn * r.dot(fam.cov_inverse() * r);
    }
    case FamilyKind::PoissonExponential: {
      if (!(theta.scalar() < 0.0)) return -std::numeric_limits<double>::infinity();
      return families::inverse_gaussian_log_density(
          families::poisson_exponential_posterior(fam.shape(), summary), -theta.scalar());
    }
    case FamilyKind::InverseGaussian:
      break;
  }
  throw DomainError(
      "conjugated_posterior_log_density: the Jeffreys posterior of the inverse Gaussian family is "
      "not a member of its conjugated family");
}

std::vector<NaturalParam> default_grid(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                       int points) {
  require_n(n);
  if (points < 2) throw DomainError("default_grid: need at least two points");
  const Vector sd = theta_scales(fam, n, theta_hat);
  std::vector<NaturalParam> grid;
  for (int i = 0; i < points; ++i) {
    const double z = -2.5 + 5.0 * i / (points - 1);
    if (fam.kind() != FamilyKind::GaussianLocation) {
      const double rate = -theta_hat.scalar();
      grid.emplace_back(-rate * std::exp(z * sd(0) / rate));
      continue;
    }
    for (Eigen::Index k = 0; k < sd.size(); ++k) {
      Vector t = theta_hat.theta();
      t(k) += z * sd(k);
      grid.emplace_back(t);
      if (z == 0.0) break;  // the center appears once
    }
  }
  return grid;
}

ExactnessReport exactness_report(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                 std::span<const NaturalParam> grid, double tol) {
  const SaddlepointProfile profile = renormalize(fam, n, theta_hat, tol);
  ExactnessReport report{0.0, profile.normalizer_error, {}, {}};
  for (const NaturalParam& theta : grid) {
    if (!in_natural_domain(fam, theta)) throw DomainError("exactness_report: grid point outside Theta");
    const double exact = conjugated_posterior_log_density(fam, n, theta_hat, theta);
    // |p/q - 1| evaluated from the log ratio keeps full relative accuracy in the tails.
    const double dev = std::abs(std::expm1(profile.log_density(theta) - exact));
    report.grid.push_back(theta);
    report.deviations.push_back(dev);
    report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
  }
  return report;
}

ExactnessReport exactness_report(const Family& fam, std::size_t n, const NaturalParam& theta_hat,
                                 double tol) {
  const std::vector<NaturalParam> grid = default_grid(fam, n, theta_hat);
  return exactness_report(fam, n, theta_hat, grid, tol);
}

}  // namespace expfam::saddlepoint
