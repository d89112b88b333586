#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "expfam/core.hpp"

namespace expfam::intervals {

enum class IntervalMethod { CredibleOneSided, ConfidencePivot, ConfidenceCdfInversion, DivergenceBall };

std::string to_string(IntervalMethod method);

/// What to do when every Poisson-exponential observation is the atom at 0.
/// Reject raises DegenerateData. Limit uses the x -> 0 limit of each
/// construction: the Levy(m kappa) posterior for the credible bound and
/// P_U(S = 0) = level for the confidence bound.
enum class ZeroDataPolicy { Reject, Limit };

/// One-sided intervals for a rate beta = -theta are [0, upper].
/// A divergence ball {theta : D_A(theta, center) <= radius} is reported with
/// lower = 0 and upper = radius.
struct IntervalResult {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
  IntervalMethod method = IntervalMethod::CredibleOneSided;
  double numeric_error = 0.0;  // root-finding tolerance or 0 for closed forms
  Vector center;               // ball center (divergence balls only)
  double radius = 0.0;         // ball radius (divergence balls only)
  bool degenerate = false;     // produced by ZeroDataPolicy::Limit
};

/// [0, F^{-1}(level) / xbar] with F = Gamma(m alpha, m); the quantile of the
/// Gamma(m alpha, m xbar) posterior.
IntervalResult gamma_credible(double alpha, const ObservationBatch& batch, double level);

/// Same endpoint from the pivot beta Xbar ~ Gamma(m alpha, m).
IntervalResult gamma_confidence(double alpha, const ObservationBatch& batch, double level);

/// Radius r = chi2_d^{-1}(level) / (2n) around thetahat = B^{-1} xbar. Uses the
/// family's own covariance B.
IntervalResult gaussian_divergence_ball(const Family& fam, const ObservationBatch& batch, double level);

/// Level-quantile of the inverse Gaussian posterior of the rate.
IntervalResult poisson_exp_credible(double kappa, const ObservationBatch& batch, double level,
                                    ZeroDataPolicy policy = ZeroDataPolicy::Reject, double tol = 1e-12);

/// Upper bound U with P_U(S <= m xbar) = level, where S ~ PoissonExponential(m kappa, U)
/// is the law of the sum. Found by root finding in log U.
IntervalResult poisson_exp_confidence(double kappa, const ObservationBatch& batch, double level,
                                      ZeroDataPolicy policy = ZeroDataPolicy::Reject, double tol = 1e-12);

enum class IntervalKind { Credible, Confidence };

/// Dispatch on family: Gamma and Poisson-exponential give rate bounds, the
/// Gaussian family a divergence ball (credible and confidence coincide).
/// DomainError for the inverse Gaussian family.
IntervalResult interval(const Family& fam, IntervalKind kind, const ObservationBatch& batch, double level,
                        ZeroDataPolicy policy = ZeroDataPolicy::Reject, double tol = 1e-12);

/// Whether the interval contains the parameter: beta = -theta in [lower, upper]
/// for rate intervals, D_A(theta, center) <= radius for balls.
bool covers(const Family& fam, const IntervalResult& interval, const NaturalParam& truth);

struct CoverageReport {
  std::size_t trials = 0;
  std::size_t hits = 0;
  std::size_t degenerate = 0;  // trials answered through ZeroDataPolicy::Limit
  double level = 0.0;
  double empirical_coverage = 0.0;
  double band_lower = 0.0;  // level -/+ 3 sqrt(level (1 - level) / trials)
  double band_upper = 0.0;

  bool within_band() const { return empirical_coverage >= band_lower && empirical_coverage <= band_upper; }
};

using IntervalOp = std::function<IntervalResult(const ObservationBatch&)>;

/// Draws `trials` datasets of size m from p_truth and counts how often the
/// interval covers truth. Trials are split into fixed chunks, chunk k drawing
/// from numerics::rng_stream(seed, k), so the result does not depend on the
/// number of threads (0 = hardware concurrency). The first per-trial error is
/// rethrown.
CoverageReport coverage_simulation(const Family& fam, const IntervalOp& op, const NaturalParam& truth, std::size_t m,
                                   double level, std::size_t trials, std::uint64_t seed, unsigned threads = 0);

}  // namespace expfam::intervals
