#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "expfam/cli.hpp"
#include "expfam/errors.hpp"
#include "expfam/families.hpp"
#include "expfam/intervals.hpp"
#include "expfam/numerics/quadrature.hpp"
#include "expfam/numerics/special_functions.hpp"
#include "expfam/prediction.hpp"
#include "expfam/saddlepoint.hpp"

namespace expfam::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string join(const std::vector<double>& xs) {
  std::ostringstream s;
  s << "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? "," : "") << xs[i];
  s << "}";
  return s.str();
}

std::vector<double> logspace(double lo, double hi, int k) {
  std::vector<double> out;
  for (int i = 0; i < k; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (k - 1)));
  return out;
}

bool is_gaussian(const Family& fam) { return fam.kind() == FamilyKind::GaussianLocation; }

// Times `body`, which fills in everything but the runtime.
VerificationReport timed(const std::function<VerificationReport()>& body) {
  const auto start = Clock::now();
  VerificationReport r = body();
  r.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

VerificationReport at_most(std::string suite, std::string check, double statistic, double threshold,
                           std::string grid) {
  return VerificationReport{std::move(suite), std::move(check), statistic <= threshold, statistic, threshold, "<=",
                            std::move(grid)};
}

// ------------------------------------------------------------------ lemma1

const std::vector<double> kPositiveMeans{0.1, 0.25, 0.5, 0.8, 1.0, 1.5, 2.5, 4.0, 7.0, 12.0};
const std::vector<double> kRealMeans{-4.0, -2.5, -1.0, -0.3, 0.0, 0.4, 1.0, 2.0, 3.5, 6.0};

// Raw sequences of length n with the given means: multiplicative spreads on
// the half-line (one exact zero for the Poisson-exponential family at n = 3),
// additive spreads on the real line.
std::vector<ObservationBatch> lemma1_sequences(const Family& fam, std::size_t n) {
  std::vector<double> w;
  if (is_gaussian(fam)) {
    w = n == 2 ? std::vector<double>{-1.0, 1.0} : std::vector<double>{-1.0, 0.0, 1.0};
  } else if (fam.has_atom() && n == 3) {
    w = {0.0, 0.9, 2.1};
  } else {
    w = n == 2 ? std::vector<double>{0.5, 1.5} : std::vector<double>{0.2, 1.0, 1.8};
  }
  std::vector<ObservationBatch> out;
  const auto& means = is_gaussian(fam) ? kRealMeans : kPositiveMeans;
  for (double mean : means) {
    std::vector<Vector> xs;
    for (double wi : w) {
      Vector x = Vector::Constant(fam.dimension(), is_gaussian(fam) ? mean + wi : mean * wi);
      xs.push_back(x);
    }
    out.push_back(ObservationBatch::from_points(xs));
  }
  return out;
}

// Closed-form value of the likelihood-ratio integral under the sqrt(A'')
// prior, where one exists.
std::optional<double> lemma1_constant(const Family& fam, std::size_t n) {
  const double nd = static_cast<double>(n);
  switch (fam.kind()) {
    case FamilyKind::Gamma: {
      const double na = nd * fam.shape();
      return std::sqrt(fam.shape()) * std::exp(numerics::log_gamma(na) + na - na * std::log(na));
    }
    case FamilyKind::GaussianLocation:
    case FamilyKind::PoissonExponential:
      return std::pow(2.0 * std::numbers::pi / nd, 0.5 * static_cast<double>(fam.dimension()));
    case FamilyKind::InverseGaussian:
      break;
  }
  return std::nullopt;
}

std::vector<VerificationReport> suite_lemma1(const RunConfig& config, const std::vector<Family>& fams) {
  std::vector<VerificationReport> out;
  for (const Family& fam : fams) {
    for (std::size_t n : {2u, 3u}) {
      const auto seqs = lemma1_sequences(fam, n);
      const std::string grid = "n=" + std::to_string(n) + "; means " + join(is_gaussian(fam) ? kRealMeans : kPositiveMeans);
      prediction::Lemma1Result result;
      out.push_back(timed([&] {
        result = prediction::lemma1_constancy(fam, seqs, {.tol = config.tol});
        return at_most("lemma1", fam.name() + " relative spread", result.relative_spread, 1e-6, grid);
      }));
      if (const auto c = lemma1_constant(fam, n)) {
        double worst = 0.0;
        for (double v : result.values) worst = std::max(worst, std::abs(v - *c));
        std::ostringstream check;
        check.precision(10);
        check << fam.name() << " closed-form constant " << *c;
        out.push_back(at_most("lemma1", check.str(), worst, 1e-7, grid));
      }
    }
  }
  return out;
}

// ------------------------------------------------------------- equivalence

std::vector<VerificationReport> suite_equivalence(const RunConfig& config, const std::vector<Family>& fams) {
  std::vector<VerificationReport> out;
  const std::vector<double> positive = logspace(0.2, 5.0, 10);
  const std::vector<double> real{-3.0, -2.2, -1.5, -0.8, -0.2, 0.3, 0.9, 1.6, 2.4, 3.0};
  for (const Family& fam : fams) {
    for (std::size_t m : {1u, 2u}) {
      out.push_back(timed([&] {
        const auto& xbars = is_gaussian(fam) ? real : positive;
        std::vector<double> ys = xbars;
        if (fam.has_atom()) ys.front() = 0.0;
        std::vector<ObservationBatch> prefixes;
        for (double x : xbars) prefixes.push_back(ObservationBatch::summary(m, Vector::Constant(fam.dimension(), x)));
        std::vector<std::vector<Vector>> futures;
        for (double y : ys) futures.push_back({Vector::Constant(fam.dimension(), y)});
        const auto rep = prediction::equivalence_check(fam, prefixes, futures, {.tol = config.tol});
        std::string grid = "m=" + std::to_string(m) + ", n=m+1; prefix means " + join(xbars) + "; futures " + join(ys);
        VerificationReport r =
            at_most("equivalence", fam.name() + " max |log CNML - log Jeffreys|", rep.max_abs_difference,
                    config.equivalence_tol, grid);
        if (!rep.failures.empty()) {
          r.pass = false;
          r.grid += "; " + std::to_string(rep.failures.size()) + " failed point(s), first: " + rep.failures.front();
        }
        return r;
      }));
    }
    if (fam.kind() == FamilyKind::Gamma && fam.shape() == 1.0) {
      out.push_back(timed([&] {
        const prediction::PredictiveQuery q{ObservationBatch::summary(1, 1.0), {point(1.0)}};
        const double c = std::exp(prediction::cnml_predictive(fam, q, {.tol = config.tol}).log_density);
        const double j = std::exp(prediction::jeffreys_predictive(fam, q, {.tol = config.tol}).log_density);
        return at_most("equivalence", fam.name() + " spot value 1/4 at x1=x2=1",
                       std::max(std::abs(c - 0.25), std::abs(j - 0.25)), 1e-9, "x1=1, x2=1");
      }));
    }
  }
  return out;
}

// ------------------------------------------------------------- saddlepoint

std::vector<VerificationReport> suite_saddlepoint(const RunConfig& config, const std::vector<Family>& fams) {
  std::vector<VerificationReport> out;
  const std::vector<double> ns{1.0, 3.0, 12.0};
  for (const Family& requested : fams) {
    // The inverse Gaussian law enters as the posterior of the
    // Poisson-exponential family with the same kappa.
    const Family fam = requested.kind() == FamilyKind::InverseGaussian
                           ? Family::poisson_exponential(requested.shape())
                           : requested;
    const std::vector<double> xbars =
        is_gaussian(fam) ? std::vector<double>{-1.0, 0.3, 2.0} : std::vector<double>{0.4, 1.0, 3.0};
    std::string label = fam.name();
    if (requested.kind() == FamilyKind::InverseGaussian) label = requested.name() + " posterior of " + fam.name();
    out.push_back(timed([&] {
      double worst = 0.0;
      for (double n : ns) {
        for (double x : xbars) {
          const NaturalParam hat = mle(fam, MeanParam(Vector(Vector::Constant(fam.dimension(), x))));
          const auto rep = saddlepoint::exactness_report(fam, static_cast<std::size_t>(n), hat, config.tol);
          worst = std::max(worst, rep.max_relative_deviation);
        }
      }
      return at_most("saddlepoint", label + " max relative deviation from the conjugated posterior", worst, 1e-6,
                     "n " + join(ns) + "; xbar " + join(xbars) + "; 11 theta points each");
    }));
  }
  return out;
}

// ----------------------------------------------------------- normalization

std::vector<VerificationReport> suite_normalization(const RunConfig& config, const std::vector<Family>& fams,
                                                    bool family_given) {
  std::vector<VerificationReport> out;
  const bool want_series = !family_given || fams.front().kind() == FamilyKind::PoissonExponential;
  if (want_series) {
    const std::vector<double> kappas = family_given ? std::vector<double>{fams.front().shape()}
                                                    : std::vector<double>{0.5, 2.0, 8.0, 32.0};
    const std::vector<double> betas{0.25, 1.0, 4.0, 16.0};
    out.push_back(timed([&] {
      double worst = 0.0;
      for (double k : kappas) {
        for (double b : betas) {
          const families::PoissonExponentialDist dist(k, b);
          const double mean = dist.mean();
          auto f = [&](double x) { return x > 0.0 ? families::poisson_exponential_density(dist, x).density : 0.0; };
          const double cont =
              numerics::integrate(f, numerics::Domain::half_line(0.0, mean), {.abs_tol = 1e-13, .rel_tol = 1e-13}).value;
          worst = std::max(worst, std::abs(dist.atom_weight() + cont - 1.0));
        }
      }
      return at_most("normalization", "poisson-exp atom + integral of the series density", worst, 1e-9,
                     "kappa " + join(kappas) + "; beta " + join(betas));
    }));
  }
  for (const Family& fam : fams) {
    out.push_back(timed([&] {
      const std::vector<double> xbars =
          is_gaussian(fam) ? std::vector<double>{-1.0, 0.5} : std::vector<double>{0.5, 2.0};
      if (fam.dimension() > 1) {
        return VerificationReport{"normalization", fam.name() + " one-step predictive mass", true, 0.0, 1e-7, "<=",
                                  "skipped: scalar families only"};
      }
      double worst = 0.0;
      for (double x : xbars) {
        const ObservationBatch prefix = ObservationBatch::summary(2, x);
        const prediction::JeffreysPredictor jp(fam, prefix, {.tol = config.tol});
        const prediction::CnmlPredictor cp(fam, prefix, 1, {.tol = config.tol});
        for (int which = 0; which < 2; ++which) {
          auto f = [&](double y) {
            const std::vector<Vector> fut{point(y)};
            return std::exp(which == 0 ? jp(fut).log_density : cp(fut).log_density);
          };
          const numerics::QuadratureOptions q{.abs_tol = 1e-9, .rel_tol = 1e-9};
          double mass = is_gaussian(fam)
                            ? numerics::integrate(f, numerics::Domain::real_line(x, 1.0), q).value
                            : numerics::integrate(f, numerics::Domain::half_line(0.0, x), q).value;
          if (fam.has_atom()) mass += f(0.0);
          worst = std::max(worst, std::abs(mass - 1.0));
        }
      }
      return at_most("normalization", fam.name() + " one-step Jeffreys and CNML predictive mass", worst, 1e-7,
                     "m=2; prefix means " + join(xbars));
    }));
  }
  return out;
}

// ---------------------------------------------------------------- coverage

VerificationReport coverage_check(const std::string& check, const intervals::CoverageReport& rep, double half_width,
                                  bool expect_inside, const std::string& grid) {
  const double deviation = std::abs(rep.empirical_coverage - rep.level);
  VerificationReport r{"coverage", check, false, rep.empirical_coverage, half_width, "", grid};
  if (expect_inside) {
    r.pass = deviation <= half_width;
    r.criterion = "within-band";
  } else {
    r.pass = deviation > half_width;
    r.criterion = "outside-band";
  }
  return r;
}

std::vector<VerificationReport> suite_coverage(const RunConfig& config, const std::vector<Family>& fams) {
  std::vector<VerificationReport> out;
  const double level = 0.9;
  const std::size_t trials = 100000;
  const auto band = [&](double p) { return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)); };
  const std::string t = "; level 0.9; 100000 trials; seed " + std::to_string(config.seed);
  for (const Family& fam : fams) {
    switch (fam.kind()) {
      case FamilyKind::Gamma:
        out.push_back(timed([&] {
          const auto op = [&](const ObservationBatch& b) { return intervals::gamma_credible(fam.shape(), b, level); };
          const auto rep = intervals::coverage_simulation(fam, op, NaturalParam(-2.0), 5, level, trials, config.seed,
                                                          config.threads);
          return coverage_check(fam.name() + " credible = pivot confidence coverage", rep, band(level), true,
                                "beta=2, m=5" + t);
        }));
        break;
      case FamilyKind::GaussianLocation:
        out.push_back(timed([&] {
          const auto op = [&](const ObservationBatch& b) { return intervals::gaussian_divergence_ball(fam, b, level); };
          const NaturalParam truth(Vector(Vector::Constant(fam.dimension(), 0.4)));
          const auto rep =
              intervals::coverage_simulation(fam, op, truth, 4, level, trials, config.seed + 1, config.threads);
          return coverage_check(fam.name() + " divergence-ball coverage", rep, 0.004, true, "theta=0.4, m=4" + t);
        }));
        break;
      case FamilyKind::PoissonExponential:
        out.push_back(timed([&] {
          const auto op = [&](const ObservationBatch& b) {
            return intervals::poisson_exp_confidence(fam.shape(), b, level, intervals::ZeroDataPolicy::Limit,
                                                     config.root_tol);
          };
          const auto rep = intervals::coverage_simulation(fam, op, NaturalParam(-1.0), 3, level, trials,
                                                          config.seed + 2, config.threads);
          return coverage_check(fam.name() + " cdf-inversion confidence coverage", rep, 0.01, true,
                                "beta=1, m=3, zero data -> limit" + t);
        }));
        out.push_back(timed([&] {
          const auto op = [&](const ObservationBatch& b) {
            return intervals::poisson_exp_credible(fam.shape(), b, level, intervals::ZeroDataPolicy::Limit,
                                                   config.root_tol);
          };
          const auto rep = intervals::coverage_simulation(fam, op, NaturalParam(-4.0), 1, level, trials,
                                                          config.seed + 3, config.threads);
          return coverage_check(fam.name() + " credible coverage differs from the level", rep, band(level), false,
                                "beta=4, m=1, zero data -> limit" + t);
        }));
        break;
      case FamilyKind::InverseGaussian:
        throw DomainError("verify coverage: no interval construction for " + fam.name());
    }
  }
  return out;
}

}  // namespace

std::vector<VerificationReport> run_verify(const RunConfig& config, const std::string& suite, bool family_given) {
  std::vector<Family> fams;
  auto defaults = [&](std::vector<Family> d) {
    if (family_given) return std::vector<Family>{make_family(config)};
    return d;
  };
  std::vector<VerificationReport> out;
  auto append = [&](std::vector<VerificationReport> part) { out.insert(out.end(), part.begin(), part.end()); };
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "lemma1") {
    known = true;
    append(suite_lemma1(config, defaults({Family::gamma(1.0), Family::gamma(2.0), Family::gaussian(1.0),
                                          Family::poisson_exponential(2.0)})));
  }
  if (all || suite == "equivalence") {
    known = true;
    append(suite_equivalence(config, defaults({Family::gamma(1.0), Family::gaussian(1.0),
                                               Family::poisson_exponential(2.0)})));
  }
  if (all || suite == "saddlepoint") {
    known = true;
    append(suite_saddlepoint(config, defaults({Family::gamma(1.0), Family::gamma(2.5), Family::gaussian(1.0),
                                               Family::poisson_exponential(2.0)})));
  }
  if (all || suite == "normalization") {
    known = true;
    append(suite_normalization(config,
                               defaults({Family::gamma(1.0), Family::gaussian(1.0), Family::poisson_exponential(2.0),
                                         Family::inverse_gaussian(2.0)}),
                               family_given));
  }
  if (all || suite == "coverage") {
    known = true;
    append(suite_coverage(config, defaults({Family::gamma(1.0), Family::gaussian(1.0),
                                            Family::poisson_exponential(2.0)})));
  }
  if (!known) {
    throw DomainError("unknown suite '" + suite + "' (lemma1, equivalence, saddlepoint, normalization, coverage, all)");
  }
  return out;
}

}  // namespace expfam::cli
