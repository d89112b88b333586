#include <algorithm>
#include <cmath>
#include <limits>

#include "expfam/errors.hpp"
#include "expfam/numerics/quadrature.hpp"
#include "expfam/prediction.hpp"

namespace expfam::prediction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

numerics::WindowOptions window_options(double tol) {
  numerics::WindowOptions opts;
  opts.quadrature.abs_tol = 0.0;
  opts.quadrature.rel_tol = tol;
  return opts;
}

LogIntegral from(const numerics::LogQuadratureResult& r) {
  return LogIntegral{r.log_value, r.relative_error, r.evaluations};
}

LogIntegral integrate_box(const std::function<double(const Vector&)>& log_f, const Vector& center,
                          const Vector& scale, double tol) {
  const auto d = static_cast<std::size_t>(center.size());
  return from(numerics::integrate_log_box(
      [&](std::span<const double> t) {
        return log_f(Eigen::Map<const Vector>(t.data(), static_cast<Eigen::Index>(t.size())));
      },
      std::span<const double>(center.data(), d), std::span<const double>(scale.data(), d),
      {.abs_tol = 0.0, .rel_tol = tol}));
}

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

LogIntegral integrate_over_theta(const Family& fam, const std::function<double(const Vector&)>& log_f,
                                 const Vector& center, const Vector& scale, double tol) {
  if (!in_natural_domain(fam, NaturalParam(center))) {
    throw DomainError("integrate_over_theta: center outside Theta");
  }
  if (fam.dimension() > 1) return integrate_box(log_f, center, scale, tol);
  auto f = [&](double t) { return log_f(point(t)); };
  const double c = center(0);
  const numerics::Domain domain = fam.kind() == FamilyKind::GaussianLocation
                                      ? numerics::Domain::real_line(c, scale(0))
                                      : numerics::Domain::negative_half_line(0.0);
  return from(numerics::integrate_log_windows(f, domain, c, window_options(tol)));
}

LogIntegral integrate_over_support(const Family& fam, const std::function<double(const Vector&)>& log_f,
                                   const Vector& center, const Vector& scale, double tol) {
  if (!in_mean_domain(fam, center)) throw DomainError("integrate_over_support: center outside the mean domain");
  if (fam.dimension() > 1) return integrate_box(log_f, center, scale, tol);
  auto f = [&](double y) { return log_f(point(y)); };
  const double c = center(0);
  const numerics::Domain domain = fam.kind() == FamilyKind::GaussianLocation
                                      ? numerics::Domain::real_line(c, scale(0))
                                      : numerics::Domain::half_line(0.0);
  LogIntegral r = from(numerics::integrate_log_windows(f, domain, c, window_options(tol)));
  if (fam.has_atom()) {
    const double atom = log_f(point(0.0));
    const double total = log_add(r.log_value, atom);
    // The atom is exact; only the continuous part carries quadrature error.
    r.relative_error *= std::exp(r.log_value - total);
    r.log_value = total;
    r.evaluations += 1;
  }
  return r;
}

LogIntegral log_evidence(const Family& fam, std::size_t k, const Vector& xbar, double tol) {
  if (k == 0) throw DomainError("log_evidence: k must be at least 1");
  if (fam.kind() == FamilyKind::PoissonExponential && xbar.size() == 1 && xbar(0) == 0.0) {
    throw DegenerateData("log_evidence: every observation is 0");
  }
  const NaturalParam hat = mle(fam, MeanParam(xbar));
  const double kk = static_cast<double>(k);
  const Vector scale = (kk * covariance(fam, hat).diagonal()).cwiseSqrt().cwiseInverse();
  // k (theta.xbar - A(theta)) = k A*(xbar) - k D_A(theta, thetahat); the
  // split keeps the integrand free of cancellation far from the origin.
  const double peak = kk * (hat.theta().dot(xbar) - cumulant(fam, hat));
  try {
    LogIntegral r = integrate_over_theta(
        fam,
        [&](const Vector& theta) {
          const NaturalParam t(theta);
          return -kk * bregman(fam, t, hat) + log_jeffreys(fam, t);
        },
        hat.theta(), scale, tol);
    r.log_value += peak;
    return r;
  } catch (const NonIntegrable& e) {
    throw ImproperPosterior(std::string("Jeffreys posterior does not normalize: ") + e.what());
  }
}

}  // namespace expfam::prediction
