#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "expfam/errors.hpp"
#include "expfam/families.hpp"
#include "expfam/numerics/special_functions.hpp"
#include "expfam/prediction.hpp"

namespace expfam::prediction {

namespace {

void require_tol(const PredictionOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("prediction: tol must be positive");
}

void require_prefix(const Family& fam, const ObservationBatch& prefix) {
  if (prefix.n == 0) throw DomainError("prediction: the prefix needs m >= 1 observations");
  if (prefix.xbar.size() != fam.dimension()) throw DomainError("prediction: prefix dimension mismatch");
  for (const Vector& x : prefix.raw) {
    if (!in_support(fam, x)) throw SupportError("prediction: prefix observation outside the support");
  }
  if (fam.kind() == FamilyKind::PoissonExponential && prefix.xbar(0) == 0.0) {
    throw DegenerateData("prediction: every prefix observation is 0");
  }
  if (!in_mean_domain(fam, prefix.xbar)) throw DomainError("prediction: prefix mean outside the mean domain");
}

void require_future(const Family& fam, std::span<const Vector> future) {
  if (future.empty()) throw DomainError("prediction: the future block is empty");
  for (const Vector& y : future) {
    if (y.size() != fam.dimension()) throw DomainError("prediction: future dimension mismatch");
    if (!in_support(fam, y)) throw SupportError("prediction: future observation outside the support");
  }
}

// Sorted before summing so that the result does not depend on the order of
// the block.
Vector block_sum(std::span<const Vector> block) {
  std::vector<Vector> sorted(block.begin(), block.end());
  std::sort(sorted.begin(), sorted.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  Vector s = Vector::Zero(block.front().size());
  for (const Vector& y : sorted) s += y;
  return s;
}

double sum_log_carrier(const Family& fam, std::span<const Vector> block) {
  double s = 0.0;
  for (const Vector& y : block) s += log_carrier(fam, y);
  return s;
}

// A*(x), extended continuously to x = 0 for the Poisson-exponential family
// (A*(x) = -sqrt(2 kappa x) -> 0).
double conjugate_value(const Family& fam, const Vector& x) {
  if (fam.kind() == FamilyKind::PoissonExponential && x.size() == 1 && x(0) == 0.0) return 0.0;
  return convex_conjugate(fam, MeanParam(x));
}

// Width of a single observation around the prefix mean.
Vector observation_scale(const Family& fam, const ObservationBatch& prefix) {
  return covariance(fam, mle(fam, prefix.mean())).diagonal().cwiseSqrt();
}

double gamma_log_evidence(double alpha, double k, double xbar) {
  return 0.5 * std::log(alpha) + numerics::log_gamma(k * alpha) - k * alpha * std::log(k * xbar);
}

}  // namespace

std::string to_string(PredictiveMethod method) {
  switch (method) {
    case PredictiveMethod::Jeffreys:
      return "jeffreys";
    case PredictiveMethod::CNML:
      return "cnml";
    case PredictiveMethod::PlugIn:
      return "plugin";
  }
  return "unknown";
}

PredictiveMethod parse_method(const std::string& name) {
  if (name == "jeffreys") return PredictiveMethod::Jeffreys;
  if (name == "cnml") return PredictiveMethod::CNML;
  if (name == "plugin" || name == "plug-in") return PredictiveMethod::PlugIn;
  throw DomainError("unknown predictive method '" + name + "' (expected jeffreys, cnml or plugin)");
}

double log_max_likelihood(const Family& fam, std::span<const Vector> sequence) {
  if (sequence.empty()) throw DomainError("log_max_likelihood: empty sequence");
  const ObservationBatch batch = ObservationBatch::from_points({sequence.begin(), sequence.end()});
  for (const Vector& x : sequence) {
    if (!in_support(fam, x)) throw SupportError("log_max_likelihood: observation outside the support");
  }
  return static_cast<double>(batch.n) * conjugate_value(fam, batch.xbar) + sum_log_carrier(fam, sequence);
}

// ---------------------------------------------------------------- Jeffreys

JeffreysPredictor::JeffreysPredictor(const Family& fam, ObservationBatch prefix, const PredictionOptions& options)
    : fam_(fam), prefix_(std::move(prefix)), options_(options) {
  require_tol(options_);
  require_prefix(fam_, prefix_);
  if (fam_.kind() == FamilyKind::Gamma) {
    prefix_evidence_.log_value =
        gamma_log_evidence(fam_.shape(), static_cast<double>(prefix_.n), prefix_.xbar(0));
  } else {
    prefix_evidence_ = log_evidence(fam_, prefix_.n, prefix_.xbar, options_.tol);
  }
}

PredictiveValue JeffreysPredictor::operator()(std::span<const Vector> future) const {
  require_future(fam_, future);
  const std::size_t n = prefix_.n + future.size();
  const Vector xbar_n =
      (static_cast<double>(prefix_.n) * prefix_.xbar + block_sum(future)) / static_cast<double>(n);
  LogIntegral full;
  if (fam_.kind() == FamilyKind::Gamma) {
    // Posterior Gamma(m alpha, m xbar) integrated against the future likelihood.
    full.log_value = gamma_log_evidence(fam_.shape(), static_cast<double>(n), xbar_n(0));
  } else {
    full = log_evidence(fam_, n, xbar_n, options_.tol);
  }
  return PredictiveValue{full.log_value - prefix_evidence_.log_value + sum_log_carrier(fam_, future),
                         PredictiveMethod::Jeffreys, full.relative_error + prefix_evidence_.relative_error,
                         full.evaluations + prefix_evidence_.evaluations};
}

PredictiveValue jeffreys_predictive(const Family& fam, const PredictiveQuery& query,
                                    const PredictionOptions& options) {
  return JeffreysPredictor(fam, query.prefix, options)(query.future);
}

// ---------------------------------------------------------------- CNML

namespace {

struct NestedState {
  const Family& fam;
  double n;
  Vector center;
  Vector scale;
  double level_tol;
  std::size_t evaluations = 0;
  double worst_error = 0.0;
};

// log of the integral over the remaining future points of
// exp(n A*((partial) / n) + sum of carriers).
double nested_log(NestedState& st, const Vector& partial, std::size_t remaining) {
  if (remaining == 0) return st.n * conjugate_value(st.fam, partial / st.n);
  const LogIntegral r = integrate_over_support(
      st.fam,
      [&](const Vector& y) { return log_carrier(st.fam, y) + nested_log(st, partial + y, remaining - 1); },
      st.center, st.scale, st.level_tol);
  st.evaluations += r.evaluations;
  st.worst_error = std::max(st.worst_error, r.relative_error);
  return r.log_value;
}

}  // namespace

CnmlPredictor::CnmlPredictor(const Family& fam, ObservationBatch prefix, std::size_t horizon,
                             const PredictionOptions& options, CnmlIntegration integration)
    : fam_(fam), prefix_(std::move(prefix)), horizon_(horizon) {
  require_tol(options);
  require_prefix(fam_, prefix_);
  if (horizon_ == 0) throw DomainError("cnml: the future block is empty");
  if (integration == CnmlIntegration::Automatic) {
    integration = horizon_ == 1 ? CnmlIntegration::Nested : CnmlIntegration::SumReduction;
  }
  if (integration == CnmlIntegration::Nested && fam_.dimension() > 1 && horizon_ > 1) {
    integration = CnmlIntegration::SumReduction;
  }

  const double n = static_cast<double>(prefix_.n + horizon_);
  const Vector s0 = static_cast<double>(prefix_.n) * prefix_.xbar;
  const Vector scale = observation_scale(fam_, prefix_);
  try {
    if (integration == CnmlIntegration::Nested) {
      NestedState st{fam_, n, prefix_.xbar, scale, options.tol / static_cast<double>(horizon_)};
      log_normalizer_ = nested_log(st, s0, horizon_);
      evaluations_ = st.evaluations;
      normalizer_error_ = st.worst_error * static_cast<double>(horizon_);
    } else {
      const double h = static_cast<double>(horizon_);
      const Family sum_family = families::convolution_power(fam_, horizon_);
      const LogIntegral r = integrate_over_support(
          sum_family,
          [&](const Vector& t) { return log_carrier(sum_family, t) + n * conjugate_value(fam_, (s0 + t) / n); },
          Vector(h * prefix_.xbar), Vector(std::sqrt(h) * scale), options.tol);
      log_normalizer_ = r.log_value;
      evaluations_ = r.evaluations;
      normalizer_error_ = r.relative_error;
    }
  } catch (const NonIntegrable& e) {
    throw NonNormalizable(std::string("CNML normalizer diverges for this prefix: ") + e.what());
  }
  if (!std::isfinite(log_normalizer_)) throw NonNormalizable("CNML normalizer is not finite");
}

PredictiveValue CnmlPredictor::operator()(std::span<const Vector> future) const {
  require_future(fam_, future);
  if (future.size() != horizon_) throw DomainError("cnml: future block length differs from the horizon");
  const double n = static_cast<double>(prefix_.n + horizon_);
  const Vector xbar_n = (static_cast<double>(prefix_.n) * prefix_.xbar + block_sum(future)) / n;
  const double numerator = n * conjugate_value(fam_, xbar_n) + sum_log_carrier(fam_, future);
  return PredictiveValue{numerator - log_normalizer_, PredictiveMethod::CNML, normalizer_error_, evaluations_};
}

PredictiveValue cnml_predictive(const Family& fam, const PredictiveQuery& query, const PredictionOptions& options) {
  return CnmlPredictor(fam, query.prefix, query.future.size(), options)(query.future);
}

// ---------------------------------------------------------------- plug-in

PredictiveValue plug_in_predictive(const Family& fam, const PredictiveQuery& query, const PredictionOptions&) {
  require_prefix(fam, query.prefix);
  require_future(fam, query.future);
  const NaturalParam hat = mle(fam, query.prefix.mean());
  double total = 0.0;
  for (const Vector& y : query.future) total += log_density(fam, hat, y);
  return PredictiveValue{total, PredictiveMethod::PlugIn, 0.0, 0};
}

PredictiveValue predictive(const Family& fam, PredictiveMethod method, const PredictiveQuery& query,
                           const PredictionOptions& options) {
  switch (method) {
    case PredictiveMethod::Jeffreys:
      return jeffreys_predictive(fam, query, options);
    case PredictiveMethod::CNML:
      return cnml_predictive(fam, query, options);
    case PredictiveMethod::PlugIn:
      return plug_in_predictive(fam, query, options);
  }
  throw DomainError("predictive: unknown method");
}

}  // namespace expfam::prediction
