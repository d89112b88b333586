// Acceptance run: one PASS/FAIL line per criterion. Oracles are closed forms,
// Boost quadrature (independent of the library integrator) and plain
// <random> sampling. Usage: acceptance <path-to-expfam-binary>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "expfam/core.hpp"
#include "expfam/families.hpp"
#include "expfam/intervals.hpp"
#include "expfam/numerics/special_functions.hpp"
#include "expfam/prediction.hpp"
#include "expfam/saddlepoint.hpp"

using namespace expfam;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  Outcome() { detail.precision(4); }

  // Records `name: value <= limit` and folds it into the verdict.
  void at_most(const std::string& name, double value, double limit) {
    const bool ok = value <= limit;
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << name << " " << value << (ok ? " <= " : " > ") << limit;
  }
  void at_least(const std::string& name, double value, double limit) {
    const bool ok = value > limit;
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << name << " " << value << (ok ? " > " : " <= ") << limit;
  }
  void require(const std::string& name, bool ok) {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << name << (ok ? " ok" : " FAILED");
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << (o.detail.tellp() > 0 ? "; " : "") << "exception: " << e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < limit_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s criterion %2d  %s | %s | runtime %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", id,
              title.c_str(), o.detail.str().c_str(), seconds, limit_seconds);
  std::fflush(stdout);
}

double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

Family random_family(int kind, std::mt19937_64& g) {
  switch (kind) {
    case 0:
      return Family::gamma(uniform(g, 0.5, 4.0));
    case 1:
      return Family::gaussian(uniform(g, 0.3, 3.0));
    case 2:
      return Family::inverse_gaussian(uniform(g, 0.5, 4.0));
    default:
      return Family::poisson_exponential(uniform(g, 0.5, 4.0));
  }
}

NaturalParam random_theta(const Family& fam, std::mt19937_64& g) {
  if (fam.kind() == FamilyKind::GaussianLocation) return NaturalParam(uniform(g, -2.0, 2.0));
  return NaturalParam(-uniform(g, 0.4, 3.0));
}

const char* kFamilyNames[] = {"gamma", "gaussian", "inverse-gaussian", "poisson-exp"};

// KL(p1 || p2) by Boost quadrature of p1 log(p1 / p2); the atom is added by hand.
double kl_by_quadrature(const Family& fam, const NaturalParam& t1, const NaturalParam& t2) {
  // Beyond 1000 / beta1 the factor exp(theta1 x) is below e^-1000 and no
  // carrier here grows fast enough to matter.
  const double cut = fam.kind() == FamilyKind::GaussianLocation ? std::numeric_limits<double>::infinity()
                                                                 : 1000.0 / -t1.scalar();
  auto term = [&](double x) {
    if (std::abs(x) > cut) return 0.0;
    const Vector v = point(x);
    const double l1 = log_density(fam, t1, v);
    const double l2 = log_density(fam, t2, v);
    const double p = std::exp(l1);
    // Near x = 0 the inverse Gaussian carrier underflows to -inf on both sides.
    return p == 0.0 || !std::isfinite(l1) ? 0.0 : p * (l1 - l2);
  };
  if (fam.kind() == FamilyKind::GaussianLocation) {
    boost::math::quadrature::sinh_sinh<double> q;
    return q.integrate(term, 1e-13);
  }
  boost::math::quadrature::exp_sinh<double> q;
  double kl = q.integrate(term, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
  if (fam.has_atom()) {
    const double a1 = cumulant(fam, t1), a2 = cumulant(fam, t2);
    // The atom mass is exp(-A(theta)).
    kl += std::exp(-a1) * (a2 - a1);
  }
  return kl;
}

// Central-difference step for A and grad A.
double fd_step(double theta) { return 1e-5 * std::max(1.0, std::abs(theta)); }

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";

  criterion(1, "KL divergence by quadrature = closed-form Bregman divergence", 10.0, [](Outcome& o) {
    std::mt19937_64 g(101);
    for (int k = 0; k < 4; ++k) {
      double worst = 0.0;
      for (int i = 0; i < 10; ++i) {
        const Family fam = random_family(k, g);
        const NaturalParam t1 = random_theta(fam, g), t2 = random_theta(fam, g);
        worst = std::max(worst, std::abs(kl_by_quadrature(fam, t1, t2) - bregman(fam, t2, t1)));
      }
      o.at_most(std::string(kFamilyNames[k]) + " max abs diff", worst, 1e-8);
    }
  });

  criterion(2, "density ratio p_theta(x) / p_thetahat(x)(x) = exp(-D_A)", 5.0, [](Outcome& o) {
    std::mt19937_64 g(202);
    for (int k = 0; k < 4; ++k) {
      double worst = 0.0;
      for (int i = 0; i < 50; ++i) {
        const Family fam = random_family(k, g);
        const NaturalParam theta = random_theta(fam, g);
        const double x = fam.kind() == FamilyKind::GaussianLocation ? uniform(g, -4.0, 4.0) : uniform(g, 0.05, 6.0);
        const Vector v = point(x);
        const NaturalParam hat = mle(fam, MeanParam(x));
        const double direct = std::exp(log_density(fam, theta, v) - log_density(fam, hat, v));
        worst = std::max(worst, std::abs(direct - robustness_ratio(fam, theta, v)));
      }
      o.at_most(std::string(kFamilyNames[k]) + " max abs diff", worst, 1e-10);
    }
  });

  criterion(3, "integral of the likelihood ratio against Jeffreys is constant", 60.0, [](Outcome& o) {
    std::mt19937_64 g(303);
    std::uint64_t stream = 0;
    const std::array<Family, 4> fams{Family::gamma(1.0), Family::gamma(2.0), Family::gaussian(1.0),
                                     Family::poisson_exponential(2.0)};
    for (const Family& fam : fams) {
      for (std::size_t n : {2u, 3u}) {
        std::vector<ObservationBatch> seqs;
        numerics::RandomStream rng(303, stream++);
        while (seqs.size() < 12) {
          const NaturalParam theta = random_theta(fam, g);
          std::vector<Vector> xs;
          for (std::size_t i = 0; i < n; ++i) xs.push_back(families::sample(fam, theta, rng));
          ObservationBatch b = ObservationBatch::from_points(xs);
          if (fam.has_atom() && b.xbar(0) == 0.0) continue;  // no MLE
          seqs.push_back(std::move(b));
        }
        const auto res = prediction::lemma1_constancy(fam, seqs, {.tol = 1e-11});
        const std::string tag = fam.name() + " n=" + std::to_string(n);
        o.at_most(tag + " spread", res.relative_spread, 1e-6);
        if (fam.kind() == FamilyKind::Gamma) {
          // sqrt(a) Gamma(n a) e^{n a} / (n a)^{n a}; Gamma(n) e^n / n^n at a = 1.
          const double na = static_cast<double>(n) * fam.shape();
          const double c = std::sqrt(fam.shape()) * std::exp(std::lgamma(na) + na - na * std::log(na));
          double worst = 0.0;
          for (double v : res.values) worst = std::max(worst, std::abs(v - c));
          o.at_most(tag + " |value - closed form|", worst, 1e-7);
        }
      }
    }
    o.at_most("|Gamma(2) e^2 / 4 - 1.8472641|", std::abs(std::exp(2.0) / 4.0 - 1.8472641), 1e-7);
  });

  criterion(4, "CNML = Jeffreys predictive on 10x10 grids, m in {1, 2}", 120.0, [](Outcome& o) {
    const std::array<Family, 3> fams{Family::gamma(1.0), Family::gaussian(1.0), Family::poisson_exponential(2.0)};
    for (const Family& fam : fams) {
      const bool real = fam.kind() == FamilyKind::GaussianLocation;
      for (std::size_t m : {1u, 2u}) {
        std::vector<ObservationBatch> prefixes;
        std::vector<std::vector<Vector>> futures;
        for (int i = 0; i < 10; ++i) {
          const double u = (i + 0.5) / 10.0;
          const double x = real ? -3.0 + 6.0 * u : 0.15 * std::pow(40.0, u);
          prefixes.push_back(ObservationBatch::summary(m, x));
          const double y = fam.has_atom() && i == 0 ? 0.0 : (real ? 2.5 - 5.3 * u : 0.1 * std::pow(70.0, u));
          futures.push_back({point(y)});
        }
        const auto rep = prediction::equivalence_check(fam, prefixes, futures, {.tol = 1e-11});
        o.require(fam.name() + " m=" + std::to_string(m) + " all points evaluated", rep.failures.empty());
        o.at_most(fam.name() + " m=" + std::to_string(m) + " max |dlog|", rep.max_abs_difference, 1e-6);
      }
    }
    const Family g1 = Family::gamma(1.0);
    const prediction::PredictiveQuery q{ObservationBatch::summary(1, 1.0), {point(1.0)}};
    o.at_most("gamma |cnml(1|1) - 0.25|", std::abs(std::exp(prediction::cnml_predictive(g1, q).log_density) - 0.25),
              1e-9);
    // x1 / (x1 + x2)^2 over the Gamma grid.
    double worst = 0.0;
    for (double x1 : {0.2, 1.0, 4.0}) {
      for (double x2 : {0.3, 1.0, 7.0}) {
        const prediction::PredictiveQuery qq{ObservationBatch::summary(1, x1), {point(x2)}};
        worst = std::max(worst, std::abs(prediction::cnml_predictive(g1, qq).log_density -
                                         std::log(x1 / ((x1 + x2) * (x1 + x2)))));
      }
    }
    o.at_most("gamma |log cnml - log x1/(x1+x2)^2|", worst, 1e-8);
  });

  criterion(5, "renormalized saddle-point density = exact conjugated posterior", 60.0, [](Outcome& o) {
    const std::array<Family, 3> fams{Family::gamma(1.5), Family::gaussian(1.0), Family::poisson_exponential(2.0)};
    for (const Family& fam : fams) {
      const bool real = fam.kind() == FamilyKind::GaussianLocation;
      double worst = 0.0;
      for (std::size_t n : {1u, 4u, 20u}) {
        for (double x : real ? std::vector<double>{-1.5, 0.2, 3.0} : std::vector<double>{0.3, 1.2, 5.0}) {
          const NaturalParam hat = mle(fam, MeanParam(x));
          worst = std::max(worst, saddlepoint::exactness_report(fam, n, hat, 1e-11).max_relative_deviation);
        }
      }
      o.at_most(fam.name() + " max rel dev", worst, 1e-6);
    }
  });

  criterion(6, "Poisson-exponential normalization and Monte Carlo agreement", 90.0, [](Outcome& o) {
    double worst = 0.0;
    boost::math::quadrature::exp_sinh<double> half;
    for (double kappa : {0.5, 2.0, 8.0, 32.0}) {
      for (double beta : {0.25, 1.0, 4.0, 16.0}) {
        const families::PoissonExponentialDist d(kappa, beta);
        auto f = [&](double x) { return x > 0.0 ? families::poisson_exponential_density(d, x).density : 0.0; };
        const double mass = half.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
        worst = std::max(worst, std::abs(mass + d.atom_weight() - 1.0));
      }
    }
    o.at_most("max |atom + integral - 1|", worst, 1e-9);

    // Compound Poisson draws: N ~ Poisson(kappa / (2 beta)), Y | N ~ Gamma(N, beta).
    const double kappa = 2.0, beta = 1.0;
    const families::PoissonExponentialDist d(kappa, beta);
    const std::size_t samples = 1'000'000;
    const int bins = 20;
    const double width = 0.3;  // last bin is [5.7, inf)
    std::mt19937_64 g(606);
    std::poisson_distribution<int> count(kappa / (2.0 * beta));
    std::size_t zeros = 0;
    std::vector<std::size_t> hist(bins, 0);
    for (std::size_t i = 0; i < samples; ++i) {
      const int k = count(g);
      if (k == 0) {
        ++zeros;
        continue;
      }
      const double y = std::gamma_distribution<double>(k, 1.0 / beta)(g);
      hist[std::min(bins - 1, static_cast<int>(y / width))]++;
    }
    const double p0 = static_cast<double>(zeros) / samples;
    o.at_most("|P(Y=0) - exp(-kappa/(2 beta))|", std::abs(p0 - std::exp(-kappa / (2.0 * beta))), 0.002);
    double worst_z = 0.0;
    auto f = [&](double x) { return x > 0.0 ? families::poisson_exponential_density(d, x).density : 0.0; };
    for (int b = 0; b < bins; ++b) {
      const double lo = b * width;
      const double p = b + 1 < bins
                           ? boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, lo + width, 15, 1e-13)
                           : half.integrate(f, lo, std::numeric_limits<double>::infinity(), 1e-13);
      const double se = std::sqrt(p * (1.0 - p) / samples);
      worst_z = std::max(worst_z, std::abs(static_cast<double>(hist[b]) / samples - p) / se);
    }
    o.at_most("max |bin freq - series mass| / MC s.e. over 20 bins", worst_z, 3.0);
  });

  criterion(7, "Gamma credible bound = confidence bound; coverage at 0.9", 60.0, [](Outcome& o) {
    std::mt19937_64 g(707);
    bool identical = true;
    for (int i = 0; i < 200; ++i) {
      const double alpha = uniform(g, 0.3, 6.0), level = uniform(g, 0.05, 0.995);
      const auto batch = ObservationBatch::summary(1 + i % 9, uniform(g, 0.01, 20.0));
      identical = identical && intervals::gamma_credible(alpha, batch, level).upper ==
                                   intervals::gamma_confidence(alpha, batch, level).upper;
    }
    o.require("endpoints bit-identical on 200 random cases", identical);
    // Posterior quantile oracle: Gamma(m a, m xbar) cdf at the bound.
    const auto batch = ObservationBatch::summary(5, 0.7);
    const double up = intervals::gamma_credible(1.0, batch, 0.9).upper;
    o.at_most("|P(beta <= upper) - 0.9|", std::abs(numerics::reg_gamma_lower(5.0, 3.5 * up) - 0.9), 1e-12);
    const Family fam = Family::gamma(1.0);
    const auto rep = intervals::coverage_simulation(
        fam, [](const ObservationBatch& b) { return intervals::gamma_credible(1.0, b, 0.9); }, NaturalParam(-2.0), 5,
        0.9, 100000, 20261017);
    o.at_least("coverage (beta=2, m=5, 1e5 trials) above 0.897", rep.empirical_coverage, 0.897);
    o.at_most("coverage", rep.empirical_coverage, 0.903);
  });

  criterion(8, "Gaussian divergence ball: posterior mass and coverage", 60.0, [](Outcome& o) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double level = 0.9;
    // d = 1, B = 1.7, n = 3: theta | x ~ N(xbar / B, 1 / (n B)).
    {
      const Family fam = Family::gaussian(1.7);
      const auto batch = ObservationBatch::summary(3, 0.8);
      const auto ball = intervals::gaussian_divergence_ball(fam, batch, level);
      const double sd = 1.0 / std::sqrt(3.0 * 1.7), half = std::sqrt(2.0 * ball.radius / 1.7);
      auto pdf = [&](double t) { return std::exp(-0.5 * t * t / (sd * sd)) / (sd * std::sqrt(2.0 * kPi)); };
      o.at_most("d=1 |mass - level|", std::abs(ts.integrate(pdf, -half, half) - level), 1e-8);
    }
    // d = 2 with correlated B; integrate over the ellipse, inner integral in closed form.
    {
      Matrix b(2, 2);
      b << 2.0, 0.6, 0.6, 1.0;
      const Family fam = Family::gaussian(b);
      const std::size_t n = 4;
      const auto batch = ObservationBatch::summary(n, Vector(Eigen::Vector2d(0.5, -1.0)));
      const auto ball = intervals::gaussian_divergence_ball(fam, batch, level);
      const Matrix sigma = b.inverse() / static_cast<double>(n);
      const double s11 = sigma(0, 0), s12 = sigma(0, 1), s22 = sigma(1, 1);
      const double cond_sd = std::sqrt(s22 - s12 * s12 / s11);
      const double r = ball.radius;
      const double a = std::sqrt(2.0 * r * b.inverse()(0, 0));
      auto outer = [&](double d1) {
        // 0.5 (b11 d1^2 + 2 b12 d1 d2 + b22 d2^2) <= r
        const double disc = std::max(0.0, (b(0, 1) * d1) * (b(0, 1) * d1) - b(1, 1) * (b(0, 0) * d1 * d1 - 2.0 * r));
        const double lo = (-b(0, 1) * d1 - std::sqrt(disc)) / b(1, 1);
        const double hi = (-b(0, 1) * d1 + std::sqrt(disc)) / b(1, 1);
        const double mu = s12 / s11 * d1;
        const double inner = 0.5 * (std::erf((hi - mu) / (cond_sd * std::sqrt(2.0))) -
                                    std::erf((lo - mu) / (cond_sd * std::sqrt(2.0))));
        return std::exp(-0.5 * d1 * d1 / s11) / std::sqrt(2.0 * kPi * s11) * inner;
      };
      o.at_most("d=2 |mass - level|", std::abs(ts.integrate(outer, -a, a) - level), 1e-8);
    }
    const Family fam = Family::gaussian(1.0);
    const auto rep = intervals::coverage_simulation(
        fam, [&](const ObservationBatch& bb) { return intervals::gaussian_divergence_ball(fam, bb, level); },
        NaturalParam(0.4), 4, level, 100000, 20261018);
    o.at_most("|coverage - 0.9| (1e5 trials)", std::abs(rep.empirical_coverage - level), 0.004);
  });

  criterion(9, "Poisson-exponential credible and confidence bounds differ", 90.0, [](Outcome& o) {
    const double tol = 1e-12, level = 0.9, kappa = 2.0;
    double smallest = std::numeric_limits<double>::infinity();
    for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto batch = ObservationBatch::summary(1, x);
      smallest = std::min(smallest, std::abs(intervals::poisson_exp_credible(kappa, batch, level,
                                                                              intervals::ZeroDataPolicy::Reject, tol)
                                                 .upper -
                                             intervals::poisson_exp_confidence(kappa, batch, level,
                                                                               intervals::ZeroDataPolicy::Reject, tol)
                                                 .upper));
    }
    o.at_least("min |credible - confidence| over xbar in {0.25..8}", smallest, 100.0 * tol);
    const Family fam = Family::poisson_exponential(kappa);
    const std::size_t trials = 100000;
    const auto rep = intervals::coverage_simulation(
        fam,
        [&](const ObservationBatch& b) {
          return intervals::poisson_exp_credible(kappa, b, level, intervals::ZeroDataPolicy::Limit, tol);
        },
        NaturalParam(-4.0), 1, level, trials, 20261019);
    const double sigma = std::sqrt(level * (1.0 - level) / trials);
    o.at_least("|credible coverage - 0.9| at beta=4 (1e5 trials)", std::abs(rep.empirical_coverage - level),
               3.0 * sigma);
  });

  criterion(10, "numerical hygiene and full verify run", 300.0, [&](Outcome& o) {
    std::mt19937_64 g(1010);
    double grad = 0.0, hess = 0.0, fy = 0.0;
    for (int k = 0; k < 4; ++k) {
      for (int i = 0; i < 10; ++i) {
        const Family fam = random_family(k, g);
        const double t = random_theta(fam, g).scalar();
        const double h = fd_step(t);
        const auto A = [&](double s) { return cumulant(fam, NaturalParam(s)); };
        const auto mu = [&](double s) { return mean_from_natural(fam, NaturalParam(s)).scalar(); };
        const double g_fd = (A(t + h) - A(t - h)) / (2.0 * h);
        const double h_fd = (mu(t + h) - mu(t - h)) / (2.0 * h);
        grad = std::max(grad, std::abs(g_fd - mu(t)) / std::abs(mu(t)));
        const double var = covariance(fam, NaturalParam(t))(0, 0);
        hess = std::max(hess, std::abs(h_fd - var) / var);
        const double m = mu(t);
        const double gap = A(t) + convex_conjugate(fam, MeanParam(m)) - t * m;
        fy = std::max(fy, std::abs(gap) / std::max(1.0, std::abs(t * m)));
      }
    }
    // d = 2 Gaussian: gradient and Hessian per coordinate.
    {
      Matrix b(2, 2);
      b << 1.5, -0.4, -0.4, 0.8;
      const Family fam = Family::gaussian(b);
      const Vector t = Eigen::Vector2d(0.3, -0.7);
      const Vector mu = mean_from_natural(fam, NaturalParam(t)).mu();
      const Matrix cov = covariance(fam, NaturalParam(t));
      for (int j = 0; j < 2; ++j) {
        Vector e = Vector::Zero(2);
        e(j) = 1e-5;
        const double g_fd = (cumulant(fam, NaturalParam(Vector(t + e))) - cumulant(fam, NaturalParam(Vector(t - e)))) / 2e-5;
        grad = std::max(grad, std::abs(g_fd - mu(j)) / std::abs(mu(j)));
        const Vector col = (mean_from_natural(fam, NaturalParam(Vector(t + e))).mu() -
                            mean_from_natural(fam, NaturalParam(Vector(t - e))).mu()) / 2e-5;
        hess = std::max(hess, (col - cov.col(j)).norm() / cov.col(j).norm());
      }
      const double gap = cumulant(fam, NaturalParam(t)) + convex_conjugate(fam, MeanParam(mu)) - t.dot(mu);
      fy = std::max(fy, std::abs(gap));
    }
    o.at_most("gradient FD rel err", grad, 1e-6);
    o.at_most("Hessian FD rel err", hess, 1e-5);
    o.at_most("Fenchel-Young gap", fy, 1e-10);

    double rt = 0.0;
    for (double p : {1e-6, 0.01, 0.1, 0.5, 0.9, 0.99, 1 - 1e-6}) {
      rt = std::max(rt, std::abs(numerics::std_normal_cdf(numerics::std_normal_quantile(p)) - p));
      for (double a : {0.3, 1.0, 7.5, 120.0}) {
        rt = std::max(rt, std::abs(numerics::reg_gamma_lower(a, numerics::inv_reg_gamma_lower(a, p)) - p));
        const families::GammaPosterior post(a, 2.0);
        rt = std::max(rt, std::abs(post.cdf(post.quantile(p)) - p));
      }
      for (double shape : {0.2, 2.0, 50.0}) {
        const families::InverseGaussianDist ig(1.3, shape);
        rt = std::max(rt, std::abs(families::inverse_gaussian_cdf(ig, families::inverse_gaussian_quantile(ig, p)) - p));
      }
    }
    o.at_most("quantile round-trip max |F(F^-1(p)) - p|", rt, 1e-9);

    if (binary.empty()) {
      o.require("expfam binary given", false);
      return;
    }
    const std::string cmd = binary + " verify --suite all --format csv --reproducible";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
      o.require("launch expfam", false);
      return;
    }
    std::string text;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) text += buf.data();
    const int status = pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n';
    o.require("verify --suite all exit 0 (" + std::to_string(lines ? lines - 1 : 0) + " checks)", code == 0);
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
