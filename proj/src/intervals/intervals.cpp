#include <cmath>
#include <string>

#include "expfam/errors.hpp"
#include "expfam/families.hpp"
#include "expfam/intervals.hpp"
#include "expfam/numerics/roots.hpp"
#include "expfam/numerics/special_functions.hpp"

namespace expfam::intervals {

namespace {

void require_level(double level, const char* what) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError(std::string(what) + ": level must lie in (0, 1)");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

void require_scalar(const ObservationBatch& batch, const char* what) {
  if (batch.n == 0) throw DomainError(std::string(what) + ": empty data");
  if (batch.xbar.size() != 1) throw DomainError(std::string(what) + ": scalar data expected");
}

// F^{-1}(level) / xbar with F = Gamma(m alpha, m). Shared by the credible and
// the confidence construction so that both give the same bits.
double gamma_upper(double alpha, const ObservationBatch& batch, double level, const char* what) {
  require_positive(alpha, "alpha");
  require_level(level, what);
  require_scalar(batch, what);
  const double xbar = batch.xbar(0);
  if (!(xbar > 0.0) || !std::isfinite(xbar)) throw DomainError(std::string(what) + ": xbar must be positive");
  const double m = static_cast<double>(batch.n);
  return numerics::inv_reg_gamma_lower(m * alpha, level) / m / xbar;
}

IntervalResult one_sided(double upper, double level, IntervalMethod method, double error) {
  IntervalResult r;
  r.lower = 0.0;
  r.upper = upper;
  r.level = level;
  r.method = method;
  r.numeric_error = error;
  return r;
}

// Validates Poisson-exponential input. True when every observation is 0 and
// the policy asks for the limit.
bool pe_zero_data(double kappa, const ObservationBatch& batch, double level, ZeroDataPolicy policy,
                  const char* what) {
  require_positive(kappa, "kappa");
  require_level(level, what);
  require_scalar(batch, what);
  const double xbar = batch.xbar(0);
  if (xbar == 0.0) {
    if (policy == ZeroDataPolicy::Reject) {
      throw DegenerateData(std::string(what) + ": every observation is 0");
    }
    return true;
  }
  if (!(xbar > 0.0) || !std::isfinite(xbar)) throw DomainError(std::string(what) + ": xbar must be positive");
  return false;
}

}  // namespace

std::string to_string(IntervalMethod method) {
  switch (method) {
    case IntervalMethod::CredibleOneSided:
      return "credible-one-sided";
    case IntervalMethod::ConfidencePivot:
      return "confidence-pivot";
    case IntervalMethod::ConfidenceCdfInversion:
      return "confidence-cdf-inversion";
    case IntervalMethod::DivergenceBall:
      return "divergence-ball";
  }
  return "unknown";
}

IntervalResult gamma_credible(double alpha, const ObservationBatch& batch, double level) {
  return one_sided(gamma_upper(alpha, batch, level, "gamma_credible"), level, IntervalMethod::CredibleOneSided,
                   0.0);
}

IntervalResult gamma_confidence(double alpha, const ObservationBatch& batch, double level) {
  return one_sided(gamma_upper(alpha, batch, level, "gamma_confidence"), level, IntervalMethod::ConfidencePivot,
                   0.0);
}

IntervalResult gaussian_divergence_ball(const Family& fam, const ObservationBatch& batch, double level) {
  if (fam.kind() != FamilyKind::GaussianLocation) throw DomainError("gaussian_divergence_ball: Gaussian family expected");
  require_level(level, "gaussian_divergence_ball");
  if (batch.n == 0 || batch.xbar.size() != fam.dimension()) {
    throw DomainError("gaussian_divergence_ball: data dimension mismatch");
  }
  const double d = static_cast<double>(fam.dimension());
  const double n = static_cast<double>(batch.n);
  // chi2_d quantile = 2 P^{-1}(d/2, level).
  const double radius = numerics::inv_reg_gamma_lower(0.5 * d, level) / n;
  IntervalResult r;
  r.lower = 0.0;
  r.upper = radius;
  r.radius = radius;
  r.level = level;
  r.method = IntervalMethod::DivergenceBall;
  r.center = mle(fam, batch.mean()).theta();
  return r;
}

IntervalResult poisson_exp_credible(double kappa, const ObservationBatch& batch, double level,
                                    ZeroDataPolicy policy, double tol) {
  require_positive(tol, "tol");
  if (pe_zero_data(kappa, batch, level, policy, "poisson_exp_credible")) {
    // Levy(c) with c = m kappa: P(beta <= q) = erfc(sqrt(c / (2q))) = 2 Phi(-sqrt(c / q)).
    const double c = static_cast<double>(batch.n) * kappa;
    const double z = numerics::std_normal_quantile(0.5 * level);
    IntervalResult r = one_sided(c / (z * z), level, IntervalMethod::CredibleOneSided, 0.0);
    r.degenerate = true;
    return r;
  }
  const families::InverseGaussianDist post = families::poisson_exponential_posterior(kappa, batch);
  const double q = families::inverse_gaussian_quantile(post, level, tol);
  return one_sided(q, level, IntervalMethod::CredibleOneSided, tol * q);
}

IntervalResult poisson_exp_confidence(double kappa, const ObservationBatch& batch, double level,
                                      ZeroDataPolicy policy, double tol) {
  require_positive(tol, "tol");
  const double m = static_cast<double>(batch.n);
  if (pe_zero_data(kappa, batch, level, policy, "poisson_exp_confidence")) {
    // P_U(S = 0) = exp(-m kappa / (2U)) = level.
    IntervalResult r = one_sided(m * kappa / (2.0 * -std::log(level)), level,
                                 IntervalMethod::ConfidenceCdfInversion, 0.0);
    r.degenerate = true;
    return r;
  }
  const double s = m * batch.xbar(0);
  // P_U(S <= s) increases in U and is at least the atom exp(-m kappa / (2U)),
  // so the zero-data bound u0 already has P >= level.
  auto g = [&](double log_u) {
    return families::poisson_exponential_cdf(families::PoissonExponentialDist(m * kappa, std::exp(log_u)), s) -
           level;
  };
  const double u0 = m * kappa / (2.0 * -std::log(level));
  double lo = std::log(u0) - 1.0;
  for (int i = 0; g(lo) >= 0.0; ++i) {
    if (i == 200) throw NonConvergence("poisson_exp_confidence: no lower bracket for the bound");
    lo -= 1.0;
  }
  const double u = std::exp(numerics::find_root(g, numerics::Bracket(lo, std::log(u0)), tol));
  return one_sided(u, level, IntervalMethod::ConfidenceCdfInversion, tol * u);
}

IntervalResult interval(const Family& fam, IntervalKind kind, const ObservationBatch& batch, double level,
                        ZeroDataPolicy policy, double tol) {
  switch (fam.kind()) {
    case FamilyKind::Gamma:
      return kind == IntervalKind::Credible ? gamma_credible(fam.shape(), batch, level)
                                            : gamma_confidence(fam.shape(), batch, level);
    case FamilyKind::GaussianLocation:
      return gaussian_divergence_ball(fam, batch, level);
    case FamilyKind::PoissonExponential:
      return kind == IntervalKind::Credible ? poisson_exp_credible(fam.shape(), batch, level, policy, tol)
                                            : poisson_exp_confidence(fam.shape(), batch, level, policy, tol);
    case FamilyKind::InverseGaussian:
      break;
  }
  throw DomainError("interval: no interval construction for the " + fam.name() + " family");
}

bool covers(const Family& fam, const IntervalResult& interval, const NaturalParam& truth) {
  if (interval.method == IntervalMethod::DivergenceBall) {
    return bregman(fam, truth, NaturalParam(interval.center)) <= interval.radius;
  }
  const double beta = -truth.scalar();
  return beta >= interval.lower && beta <= interval.upper;
}

}  // namespace expfam::intervals
