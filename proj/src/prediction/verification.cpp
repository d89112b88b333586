#include <algorithm>
#include <cmath>
#include <optional>

#include "expfam/errors.hpp"
#include "expfam/prediction.hpp"

namespace expfam::prediction {

double regret(const Family& fam, PredictiveMethod method, std::span<const Vector> sequence, std::size_t m,
              const PredictionOptions& options) {
  if (m == 0 || m >= sequence.size()) throw DomainError("regret: need 1 <= m < n");
  PredictiveQuery query{ObservationBatch::from_points({sequence.begin(), sequence.begin() + m}),
                        {sequence.begin() + m, sequence.end()}};
  const PredictiveValue p = predictive(fam, method, query, options);
  return -p.log_density + log_max_likelihood(fam, sequence);
}

Lemma1Result lemma1_constancy(const Family& fam, std::span<const ObservationBatch> sequences,
                              const PredictionOptions& options, double prior_scale) {
  if (sequences.empty()) throw DomainError("lemma1_constancy: no sequences");
  if (!(prior_scale > 0.0)) throw DomainError("lemma1_constancy: prior_scale must be positive");
  if (!(options.tol > 0.0)) throw DomainError("lemma1_constancy: tol must be positive");
  const double log_scale = std::log(prior_scale);

  Lemma1Result out;
  for (const ObservationBatch& batch : sequences) {
    if (batch.n == 0) throw DomainError("lemma1_constancy: empty sequence");
    if (fam.kind() == FamilyKind::PoissonExponential && batch.xbar(0) == 0.0) {
      throw DegenerateData("lemma1_constancy: every observation is 0");
    }
    const NaturalParam hat = mle(fam, batch.mean());
    const double n = static_cast<double>(batch.n);
    std::function<double(const NaturalParam&)> log_ratio;
    if (!batch.raw.empty()) {
      log_ratio = [&](const NaturalParam& t) {
        double s = 0.0;
        for (const Vector& x : batch.raw) s += log_density(fam, t, x) - log_density(fam, hat, x);
        return s;
      };
    } else {
      log_ratio = [&](const NaturalParam& t) { return -n * bregman(fam, t, hat); };
    }
    const Vector scale = (n * covariance(fam, hat).diagonal()).cwiseSqrt().cwiseInverse();
    LogIntegral r;
    try {
      r = integrate_over_theta(
          fam,
          [&](const Vector& theta) {
            const NaturalParam t(theta);
            return log_ratio(t) + log_jeffreys(fam, t) + log_scale;
          },
          hat.theta(), scale, options.tol);
    } catch (const NonIntegrable& e) {
      throw ImproperPosterior(std::string("lemma1_constancy: integral diverges: ") + e.what());
    }
    out.values.push_back(std::exp(r.log_value));
    out.max_relative_error = std::max(out.max_relative_error, r.relative_error);
  }

  std::vector<double> sorted = out.values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  const double median = k % 2 == 1 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  out.relative_spread = (sorted.back() - sorted.front()) / median;
  return out;
}

EquivalenceReport equivalence_check(const Family& fam, std::span<const ObservationBatch> prefixes,
                                    std::span<const std::vector<Vector>> futures, const PredictionOptions& options) {
  if (prefixes.empty() || futures.empty()) throw DomainError("equivalence_check: empty grid");
  const std::size_t horizon = futures.front().size();
  for (const auto& f : futures) {
    if (f.size() != horizon) throw DomainError("equivalence_check: future blocks differ in length");
  }

  EquivalenceReport report;
  auto where = [](std::size_t i, std::size_t j) {
    return " at prefix " + std::to_string(i) + ", future " + std::to_string(j);
  };
  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    std::optional<CnmlPredictor> cnml;
    std::optional<JeffreysPredictor> jeffreys;
    std::string cnml_error, jeffreys_error;
    try {
      cnml.emplace(fam, prefixes[i], horizon, options);
    } catch (const Error& e) {
      cnml_error = e.what();
    }
    try {
      jeffreys.emplace(fam, prefixes[i], options);
    } catch (const Error& e) {
      jeffreys_error = e.what();
    }
    for (std::size_t j = 0; j < futures.size(); ++j) {
      EquivalencePoint pt{i, j};
      bool ok = true;
      if (cnml) {
        try {
          pt.cnml = (*cnml)(futures[j]).log_density;
        } catch (const Error& e) {
          report.failures.push_back("cnml failed" + where(i, j) + ": " + e.what());
          ok = false;
        }
      } else {
        report.failures.push_back("cnml failed" + where(i, j) + ": " + cnml_error);
        ok = false;
      }
      if (jeffreys) {
        try {
          pt.jeffreys = (*jeffreys)(futures[j]).log_density;
        } catch (const Error& e) {
          report.failures.push_back("jeffreys failed" + where(i, j) + ": " + e.what());
          ok = false;
        }
      } else {
        report.failures.push_back("jeffreys failed" + where(i, j) + ": " + jeffreys_error);
        ok = false;
      }
      if (!ok) continue;
      pt.abs_difference = std::abs(pt.cnml - pt.jeffreys);
      report.max_abs_difference = std::max(report.max_abs_difference, pt.abs_difference);
      report.points.push_back(pt);
    }
  }
  return report;
}

}  // namespace expfam::prediction
