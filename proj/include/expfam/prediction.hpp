#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "expfam/core.hpp"

namespace expfam::prediction {

enum class PredictiveMethod { Jeffreys, CNML, PlugIn };

std::string to_string(PredictiveMethod method);
/// "jeffreys", "cnml", "plugin" (DomainError otherwise).
PredictiveMethod parse_method(const std::string& name);

/// Observed prefix x^m and the future points x_{m+1}..x_n to be scored.
struct PredictiveQuery {
  ObservationBatch prefix;
  std::vector<Vector> future;
};

struct PredictiveValue {
  double log_density = 0.0;
  PredictiveMethod method = PredictiveMethod::Jeffreys;
  double normalizer_error = 0.0;  // relative error of the normalizing integral
  std::size_t evaluations = 0;
};

struct PredictionOptions {
  double tol = 1e-10;  // relative tolerance of every normalizing integral
};

struct LogIntegral {
  double log_value = 0.0;
  double relative_error = 0.0;
  std::size_t evaluations = 0;
};

// Integration helpers shared by the predictors.

/// log of the integral of exp(log_f(theta)) over Theta. `center` must lie in
/// Theta; `scale` is a rough width per coordinate (used on the real line only).
LogIntegral integrate_over_theta(const Family& fam, const std::function<double(const Vector&)>& log_f,
                                 const Vector& center, const Vector& scale, double tol);

/// log of the integral of exp(log_f(y)) against the base measure of the
/// family's observations: Lebesgue measure on the support plus the atom at 0
/// for the Poisson-exponential family.
LogIntegral integrate_over_support(const Family& fam, const std::function<double(const Vector&)>& log_f,
                                   const Vector& center, const Vector& scale, double tol);

/// log of the integral of exp(k (theta.xbar - A(theta))) times the Jeffreys
/// density over Theta. ImproperPosterior when it diverges.
LogIntegral log_evidence(const Family& fam, std::size_t k, const Vector& xbar, double tol);

/// n A*(xbar) + sum of log carriers: the log likelihood at the MLE. Needs the
/// raw observations.
double log_max_likelihood(const Family& fam, std::span<const Vector> sequence);

/// Jeffreys posterior predictive of the future block. Gamma uses the closed
/// form Gamma(m alpha, m xbar) posterior; the other families integrate.
PredictiveValue jeffreys_predictive(const Family& fam, const PredictiveQuery& query,
                                    const PredictionOptions& options = {});

/// Conditional NML: the maximized likelihood of the full sequence normalized
/// over every possible future block of the same length. NonNormalizable when
/// the normalizing integral diverges.
///
/// One future point: direct quadrature. Longer blocks: the integrand depends
/// on the block only through its sum, whose base measure is the carrier of
/// families::convolution_power, so a single quadrature suffices. Nested
/// quadrature over every future point (tolerance tol / h per level) is kept
/// as an independent check; its cost grows like N^h.
PredictiveValue cnml_predictive(const Family& fam, const PredictiveQuery& query,
                                const PredictionOptions& options = {});

/// p_{thetahat(prefix)}(future).
PredictiveValue plug_in_predictive(const Family& fam, const PredictiveQuery& query,
                                   const PredictionOptions& options = {});

PredictiveValue predictive(const Family& fam, PredictiveMethod method, const PredictiveQuery& query,
                           const PredictionOptions& options = {});

enum class CnmlIntegration { Automatic, Nested, SumReduction };

/// Precomputes the prefix-dependent normalizer so that many futures can be
/// scored against one prefix.
class CnmlPredictor {
 public:
  CnmlPredictor(const Family& fam, ObservationBatch prefix, std::size_t horizon,
                const PredictionOptions& options = {},
                CnmlIntegration integration = CnmlIntegration::Automatic);
  PredictiveValue operator()(std::span<const Vector> future) const;
  double log_normalizer() const { return log_normalizer_; }

 private:
  Family fam_;
  ObservationBatch prefix_;
  std::size_t horizon_;
  double log_normalizer_ = 0.0;
  double normalizer_error_ = 0.0;
  std::size_t evaluations_ = 0;
};

class JeffreysPredictor {
 public:
  JeffreysPredictor(const Family& fam, ObservationBatch prefix, const PredictionOptions& options = {});
  PredictiveValue operator()(std::span<const Vector> future) const;

 private:
  Family fam_;
  ObservationBatch prefix_;
  PredictionOptions options_;
  LogIntegral prefix_evidence_;
};

struct RegretRecord {
  std::string sequence_id;
  PredictiveMethod method;
  double regret;
};

/// -ln p(x_{m+1}^n | x^m) + ln p_{thetahat(x^n)}(x^n).
double regret(const Family& fam, PredictiveMethod method, std::span<const Vector> sequence, std::size_t m,
              const PredictionOptions& options = {});

struct Lemma1Result {
  std::vector<double> values;
  double relative_spread = 0.0;  // (max - min) / median
  double max_relative_error = 0.0;
};

/// For each sequence, the integral over Theta of p_theta(x^n) / p_{thetahat}(x^n)
/// times prior_scale * Jeffreys. The likelihood ratio is taken from the raw
/// observations when present and from exp(-n D_A(theta, thetahat)) otherwise.
Lemma1Result lemma1_constancy(const Family& fam, std::span<const ObservationBatch> sequences,
                              const PredictionOptions& options = {}, double prior_scale = 1.0);

struct EquivalencePoint {
  std::size_t prefix_index = 0;
  std::size_t future_index = 0;
  double cnml = 0.0;
  double jeffreys = 0.0;
  double abs_difference = 0.0;
};

struct EquivalenceReport {
  double max_abs_difference = 0.0;
  std::vector<EquivalencePoint> points;
  // One message per grid point where a predictor failed, naming the predictor.
  std::vector<std::string> failures;
};

/// max over the grid of |log CNML - log Jeffreys|. Every future block must
/// have the same length.
EquivalenceReport equivalence_check(const Family& fam, std::span<const ObservationBatch> prefixes,
                                    std::span<const std::vector<Vector>> futures,
                                    const PredictionOptions& options = {});

}  // namespace expfam::prediction
