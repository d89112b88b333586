#include <cmath>
#include <ostream>

#include <CLI11.hpp>

#include "expfam/cli.hpp"
#include "expfam/errors.hpp"
#include "expfam/families.hpp"
#include "expfam/intervals.hpp"
#include "expfam/prediction.hpp"

namespace expfam::cli {

namespace {

struct Args {
  RunConfig config;
  std::string format = "json";
  std::string zero_data = "reject";
  std::optional<std::string> rate, theta, mean, x;
  std::vector<std::string> future;
  std::string method;
  std::string suite = "all";
  bool compare = false;
};

Record vector_value(const Vector& v) {
  if (v.size() == 1) return v(0);
  Record a = Record::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector to_vector(const std::vector<double>& xs) {
  return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Vector parse_point(const std::string& text, const Family& fam, const char* flag) {
  const Vector v = to_vector(parse_list(text));
  if (v.size() != fam.dimension()) {
    throw DomainError(std::string(flag) + " needs " + std::to_string(fam.dimension()) + " coordinate(s)");
  }
  return v;
}

// Exactly one of --rate (theta = -rate), --theta, --mean.
NaturalParam parameter(const Args& a, const Family& fam) {
  const int given = int(a.rate.has_value()) + int(a.theta.has_value()) + int(a.mean.has_value());
  if (given != 1) throw DomainError("give exactly one of --rate, --theta, --mean");
  NaturalParam theta(Vector(Vector::Zero(fam.dimension())));
  if (a.rate) {
    if (fam.kind() == FamilyKind::GaussianLocation) throw DomainError("--rate applies to the half-line families");
    theta = NaturalParam(-parse_point(*a.rate, fam, "--rate"));
  } else if (a.theta) {
    theta = NaturalParam(parse_point(*a.theta, fam, "--theta"));
  } else {
    const Vector mu = parse_point(*a.mean, fam, "--mean");
    if (!in_mean_domain(fam, mu)) throw DomainError("--mean lies outside the mean domain");
    theta = mle(fam, MeanParam(mu));
  }
  if (!in_natural_domain(fam, theta)) throw DomainError("parameter lies outside the natural domain");
  return theta;
}

ObservationBatch load_data(const Args& a, const Family& fam) {
  if (!a.config.data_path) throw DomainError("--data <path> is required");
  return ObservationBatch::from_points(read_data(*a.config.data_path, static_cast<std::size_t>(fam.dimension())));
}

std::vector<Vector> future_points(const Args& a, const Family& fam) {
  if (a.future.empty()) throw DomainError("--future is required");
  std::vector<Vector> out;
  for (const std::string& text : a.future) {
    if (fam.dimension() == 1) {
      for (double y : parse_list(text)) out.push_back(point(y));
    } else {
      out.push_back(parse_point(text, fam, "--future"));
    }
  }
  for (const Vector& y : out) {
    if (!in_support(fam, y)) throw SupportError("--future point outside the support of " + fam.name());
  }
  return out;
}

std::vector<Record> cmd_density(const Args& a) {
  const Family fam = make_family(a.config);
  const NaturalParam theta = parameter(a, fam);
  if (!a.x) throw DomainError("--x is required");
  const Vector x = parse_point(*a.x, fam, "--x");
  if (!in_support(fam, x)) throw SupportError("x outside the support of " + fam.name());
  Record r;
  r["family"] = fam.name();
  r["x"] = vector_value(x);
  r["theta"] = vector_value(theta.theta());
  const double ld = log_density(fam, theta, x);
  const bool atom = fam.has_atom() && x(0) == 0.0;
  r["density"] = atom ? 0.0 : std::exp(ld);
  r["log_density"] = atom ? Record() : Record(ld);
  if (fam.has_atom()) r["atom"] = atom ? std::exp(ld) : 0.0;
  return {r};
}

std::vector<Record> cmd_predict(const Args& a) {
  const Family fam = make_family(a.config);
  const ObservationBatch prefix = load_data(a, fam);
  const prediction::PredictiveQuery q{prefix, future_points(a, fam)};
  const prediction::PredictionOptions opts{.tol = a.config.tol};
  const auto method = prediction::parse_method(a.method.empty() ? "cnml" : a.method);
  const auto value = prediction::predictive(fam, method, q, opts);
  Record r;
  r["family"] = fam.name();
  r["method"] = prediction::to_string(method);
  r["m"] = prefix.n;
  r["horizon"] = q.future.size();
  r["xbar"] = vector_value(prefix.xbar);
  Record fut = Record::array();
  for (const Vector& y : q.future) fut.push_back(vector_value(y));
  r["future"] = fut;
  r["log_density"] = value.log_density;
  r["normalizer_error"] = value.normalizer_error;
  if (a.compare) {
    const double c = method == prediction::PredictiveMethod::CNML
                         ? value.log_density
                         : prediction::cnml_predictive(fam, q, opts).log_density;
    const double j = method == prediction::PredictiveMethod::Jeffreys
                         ? value.log_density
                         : prediction::jeffreys_predictive(fam, q, opts).log_density;
    r["log_cnml"] = c;
    r["log_jeffreys"] = j;
    r["abs_difference"] = std::abs(c - j);
    r["equivalence_tol"] = a.config.equivalence_tol;
    r["within_tolerance"] = std::abs(c - j) <= a.config.equivalence_tol;
  }
  return {r};
}

intervals::IntervalKind parse_kind(const std::string& method) {
  if (method.empty() || method == "credible") return intervals::IntervalKind::Credible;
  if (method == "confidence") return intervals::IntervalKind::Confidence;
  throw DomainError("unknown interval method '" + method + "' (credible, confidence)");
}

Record interval_record(const intervals::IntervalResult& res) {
  Record r;
  r["method"] = intervals::to_string(res.method);
  r["level"] = res.level;
  r["lower"] = res.lower;
  r["upper"] = res.upper;
  r["numeric_error"] = res.numeric_error;
  r["degenerate"] = res.degenerate;
  if (res.method == intervals::IntervalMethod::DivergenceBall) {
    r["center"] = vector_value(res.center);
    r["radius"] = res.radius;
  }
  return r;
}

std::vector<Record> cmd_interval(const Args& a) {
  const Family fam = make_family(a.config);
  const ObservationBatch batch = load_data(a, fam);
  const auto kind = parse_kind(a.method);
  const auto run = [&](intervals::IntervalKind k) {
    return intervals::interval(fam, k, batch, a.config.level, a.config.zero_data, a.config.root_tol);
  };
  const intervals::IntervalResult res = run(kind);
  Record r;
  r["family"] = fam.name();
  r["m"] = batch.n;
  r["xbar"] = vector_value(batch.xbar);
  r.update(interval_record(res));
  if (a.compare) {
    const auto cred = kind == intervals::IntervalKind::Credible ? res : run(intervals::IntervalKind::Credible);
    const auto conf = kind == intervals::IntervalKind::Confidence ? res : run(intervals::IntervalKind::Confidence);
    const double diff = std::abs(cred.upper - conf.upper);
    r["credible_upper"] = cred.upper;
    r["confidence_upper"] = conf.upper;
    r["abs_difference"] = diff;
    // Endpoints count as distinct once they differ by more than 100 root tolerances.
    r["coincide"] = diff <= 100.0 * a.config.root_tol * std::max(1.0, cred.upper);
  }
  return {r};
}

std::vector<Record> cmd_coverage(const Args& a) {
  const Family fam = make_family(a.config);
  const NaturalParam truth = parameter(a, fam);
  const auto kind = parse_kind(a.method);
  // Simulated all-zero Poisson-exponential samples are routine, so the
  // coverage command always answers them through the limit.
  const auto op = [&](const ObservationBatch& b) {
    return intervals::interval(fam, kind, b, a.config.level, intervals::ZeroDataPolicy::Limit, a.config.root_tol);
  };
  if (fam.kind() == FamilyKind::InverseGaussian) {
    throw DomainError("coverage: no interval construction for " + fam.name());
  }
  const auto rep = intervals::coverage_simulation(fam, op, truth, a.config.m, a.config.level, a.config.trials,
                                                  a.config.seed, a.config.threads);
  Record r;
  r["family"] = fam.name();
  r["method"] = kind == intervals::IntervalKind::Credible ? "credible" : "confidence";
  r["theta"] = vector_value(truth.theta());
  r["m"] = a.config.m;
  r["seed"] = a.config.seed;
  r["trials"] = rep.trials;
  r["hits"] = rep.hits;
  r["degenerate"] = rep.degenerate;
  r["level"] = rep.level;
  r["empirical_coverage"] = rep.empirical_coverage;
  r["band_lower"] = rep.band_lower;
  r["band_upper"] = rep.band_upper;
  r["within_band"] = rep.within_band();
  return {r};
}

void validate(const RunConfig& c) {
  for (double t : {c.tol, c.root_tol, c.equivalence_tol}) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("tolerances must be positive");
  }
  if (!(c.level > 0.0 && c.level < 1.0)) throw DomainError("--level must lie in (0, 1)");
  if (c.m == 0) throw DomainError("--m must be at least 1");
  if (c.trials == 0) throw DomainError("--trials must be at least 1");
}

int numeric_failure(std::ostream& err, const Error& e) {
  err << "numerical error: " << e.what() << "\n";
  return kNumericalError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Args a;
  RunConfig& c = a.config;
  CLI::App app{"Exponential-family density, prediction, interval and verification tool", "expfam"};
  app.set_config("--config", "", "flat key=value file (flags override it)");
  app.require_subcommand(1, 1);

  app.add_option("--family", c.family, "gamma | gaussian | inverse-gaussian | poisson-exp")->capture_default_str();
  app.add_option("--shape", c.shape, "Gamma shape alpha")->capture_default_str();
  app.add_option("--kappa", c.kappa, "inverse Gaussian / Poisson-exponential kappa")->capture_default_str();
  app.add_option("--cov", c.cov, "Gaussian covariance B: scalar or d*d entries")->capture_default_str();
  app.add_option("--tol", c.tol, "quadrature tolerance")->capture_default_str();
  app.add_option("--root-tol", c.root_tol, "root-finding tolerance")->capture_default_str();
  app.add_option("--equivalence-tol", c.equivalence_tol, "|log CNML - log Jeffreys| threshold")
      ->capture_default_str();
  app.add_option("--seed", c.seed, "64-bit seed")->capture_default_str();
  app.add_option("--format", a.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--data", c.data_path, "observations, one per line");
  app.add_option("--level", c.level, "interval level")->capture_default_str();
  app.add_option("--m", c.m, "sample size per coverage trial")->capture_default_str();
  app.add_option("--trials", c.trials, "coverage trials")->capture_default_str();
  app.add_option("--threads", c.threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--zero-data", a.zero_data, "all-zero Poisson-exponential data: reject | limit")
      ->check(CLI::IsMember({"reject", "limit"}))
      ->capture_default_str();
  app.add_option("--rate", a.rate, "rate beta = -theta");
  app.add_option("--theta", a.theta, "natural parameter");
  app.add_option("--mean", a.mean, "mean parameter");
  app.add_option("--x", a.x, "evaluation point");
  app.add_option("--future", a.future, "future block; a list for scalar families, one point per flag otherwise");
  app.add_option("--method", a.method, "predict: cnml | jeffreys | plugin; interval/coverage: credible | confidence");
  app.add_flag("--compare", a.compare, "also report the other method side by side");
  app.add_option("--suite", a.suite, "lemma1 | equivalence | saddlepoint | normalization | coverage | all")
      ->capture_default_str();
  app.add_flag("--reproducible", c.reproducible, "omit wall-clock runtimes");

  auto* density = app.add_subcommand("density", "density or atom at a point");
  auto* predict = app.add_subcommand("predict", "log predictive density of a future block");
  auto* interval = app.add_subcommand("interval", "one-sided interval or divergence ball");
  auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage of an interval construction");
  auto* verify = app.add_subcommand("verify", "verification suites");
  for (auto* sub : {density, predict, interval, coverage, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  c.format = a.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  c.zero_data = a.zero_data == "limit" ? intervals::ZeroDataPolicy::Limit : intervals::ZeroDataPolicy::Reject;

  try {
    validate(c);
    std::vector<Record> records;
    int code = kOk;
    if (density->parsed()) {
      records = cmd_density(a);
    } else if (predict->parsed()) {
      records = cmd_predict(a);
    } else if (interval->parsed()) {
      records = cmd_interval(a);
    } else if (coverage->parsed()) {
      records = cmd_coverage(a);
    } else {
      const bool family_given = app.count("--family") > 0;
      for (const VerificationReport& rep : run_verify(c, a.suite, family_given)) {
        records.push_back(to_record(rep, !c.reproducible));
        if (!rep.pass) code = kVerificationFailed;
      }
    }
    out << render(records, c.format);
    return code;
  } catch (const DegenerateData& e) {
    err << "degenerate data: " << e.what() << "\n";
    return kDegenerateData;
  } catch (const SupportError& e) {
    err << "SupportError: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "DomainError: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    return numeric_failure(err, e);
  }
}

}  // namespace expfam::cli
