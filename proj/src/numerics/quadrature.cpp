#include "expfam/numerics/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "expfam/errors.hpp"

namespace expfam::numerics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525634342, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

// Maps t in [0, 1] onto one piece of the integration domain.
struct PieceMap {
  enum class Kind { Linear, Up, Down };
  Kind kind = Kind::Linear;
  double origin = 0.0;
  double span = 1.0;

  // Returns x and dx/dt; x is +-inf at t = 1 for the unbounded kinds.
  std::pair<double, double> operator()(double t) const {
    switch (kind) {
      case Kind::Linear:
        return {origin + span * t, span};
      case Kind::Up: {
        const double u = 1.0 - t;
        if (u <= 0.0) return {kInf, kInf};
        return {origin + span * t / u, span / (u * u)};
      }
      case Kind::Down: {
        const double u = 1.0 - t;
        if (u <= 0.0) return {-kInf, kInf};
        return {origin - span * t / u, span / (u * u)};
      }
    }
    return {0.0, 0.0};
  }
};

std::vector<PieceMap> pieces_for(const Domain& d) {
  if (!(d.scale > 0.0)) throw DomainError("integrate: domain scale must be positive");
  if (d.lower_infinite() && d.upper_infinite()) {
    return {PieceMap{PieceMap::Kind::Up, d.center, d.scale},
            PieceMap{PieceMap::Kind::Down, d.center, d.scale}};
  }
  if (d.upper_infinite()) return {PieceMap{PieceMap::Kind::Up, d.lower, d.scale}};
  if (d.lower_infinite()) return {PieceMap{PieceMap::Kind::Down, d.upper, d.scale}};
  if (!(d.lower < d.upper)) throw DomainError("integrate: domain requires lower < upper");
  return {PieceMap{PieceMap::Kind::Linear, d.lower, d.upper - d.lower}};
}

struct Segment {
  int piece = 0;
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct ByError {
  bool operator()(const Segment& l, const Segment& r) const { return l.error < r.error; }
};

class AdaptiveRule {
 public:
  AdaptiveRule(const Integrand& f, std::vector<PieceMap> maps) : f_(f), maps_(std::move(maps)) {}

  Segment apply(int piece, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = eval(piece, c);
    double kronrod = fc * kKronrodWeights[10];
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
      const double dx = h * kNodes[j];
      const double pair = eval(piece, c - dx) + eval(piece, c + dx);
      kronrod += kKronrodWeights[j] * pair;
      if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    return Segment{piece, a, b, kronrod * h, std::abs(kronrod - gauss) * h};
  }

  std::size_t evaluations() const { return evaluations_; }
  std::size_t pieces() const { return maps_.size(); }

 private:
  double eval(int piece, double t) {
    ++evaluations_;
    const auto [x, jac] = maps_[static_cast<std::size_t>(piece)](t);
    if (!std::isfinite(x) || !std::isfinite(jac)) return 0.0;
    const double fx = f_(x);
    if (std::isnan(fx)) {
      throw DomainError("integrate: integrand returned NaN at x=" + std::to_string(x));
    }
    if (fx == 0.0) return 0.0;
    const double g = fx * jac;
    if (!std::isfinite(g)) {
      throw NonConvergence("integrate: integrand is not finite at x=" + std::to_string(x));
    }
    return g;
  }

  const Integrand& f_;
  std::vector<PieceMap> maps_;
  std::size_t evaluations_ = 0;
};

std::vector<double> initial_breakpoints(int levels) {
  std::vector<double> pts{0.0, 0.5, 1.0};
  double h = 0.5;
  for (int k = 0; k < levels; ++k) {
    h *= 0.5;
    pts.push_back(h);
    pts.push_back(1.0 - h);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double target(const QuadratureOptions& o, double value) {
  return std::max(o.abs_tol, o.rel_tol * std::abs(value));
}

// Raised from inside a shifted log-space integrand when the shift turns out
// to be too small to avoid overflow; carries the offending log level.
struct ReferenceTooLow {
  double level;
};

}  // namespace

Domain Domain::finite(double a, double b) {
  if (!(a < b)) throw DomainError("Domain::finite requires a < b");
  return Domain{a, b, 1.0, 0.5 * (a + b)};
}

Domain Domain::half_line(double a, double scale) { return Domain{a, kInf, scale, a}; }

Domain Domain::negative_half_line(double b, double scale) { return Domain{-kInf, b, scale, b}; }

Domain Domain::real_line(double center, double scale) {
  return Domain{-kInf, kInf, scale, center};
}

QuadratureResult integrate(const Integrand& f, const Domain& domain,
                           const QuadratureOptions& options) {
  if (!(options.abs_tol > 0.0) && !(options.rel_tol > 0.0)) {
    throw DomainError("integrate: a positive tolerance is required");
  }
  AdaptiveRule rule(f, pieces_for(domain));
  const std::vector<double> breaks = initial_breakpoints(std::max(0, options.endpoint_levels));

  std::priority_queue<Segment, std::vector<Segment>, ByError> active;
  double frozen_value = 0.0;
  double frozen_error = 0.0;
  double value = 0.0;
  double error = 0.0;
  for (int p = 0; p < static_cast<int>(rule.pieces()); ++p) {
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      Segment s = rule.apply(p, breaks[i], breaks[i + 1]);
      value += s.value;
      error += s.error;
      active.push(s);
    }
  }

  std::size_t iteration = 0;
  while (error > target(options, value) && !active.empty() &&
         rule.evaluations() < options.max_evaluations) {
    const Segment worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 8.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen_value += worst.value;
      frozen_error += worst.error;
      continue;
    }
    const Segment left = rule.apply(worst.piece, worst.a, mid);
    const Segment right = rule.apply(worst.piece, mid, worst.b);
    active.push(left);
    active.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;

    // Re-sum periodically so the running totals do not drift.
    if (++iteration % 64 == 0) {
      auto copy = active;
      value = frozen_value;
      error = frozen_error;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }

  {
    auto copy = active;
    value = frozen_value;
    error = frozen_error;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
  }

  if (error > target(options, value)) {
    throw NonConvergence("integrate: tolerance not reached", value, error, rule.evaluations());
  }
  return QuadratureResult{value, error, rule.evaluations()};
}

QuadratureResult integrate_box(const std::function<double(std::span<const double>)>& f,
                               std::span<const Domain> domains,
                               const QuadratureOptions& options) {
  const std::size_t d = domains.size();
  if (d == 0 || d > 3) throw DomainError("integrate_box: dimension must be 1, 2 or 3");

  std::array<double, 3> point{};
  std::size_t evaluations = 0;
  // Inner errors are absolute; they are related to the outer value through
  // the largest inner value seen.
  double inner_error = 0.0;
  double inner_peak = 0.0;

  QuadratureOptions inner = options;
  inner.abs_tol = options.abs_tol * 1e-2;

  std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
    const bool innermost = (k + 1 == d);
    Integrand g = [&, k, innermost](double x) {
      point[k] = x;
      if (innermost) {
        ++evaluations;
        return f(std::span<const double>(point.data(), d));
      }
      return level(k + 1);
    };
    const QuadratureResult r = integrate(g, domains[k], inner);
    inner_error = std::max(inner_error, r.error_estimate);
    inner_peak = std::max(inner_peak, std::abs(r.value));
    return r.value;
  };

  // The outer level is run separately so its value and error are both kept.
  Integrand outer = [&](double x) {
    point[0] = x;
    if (d == 1) {
      ++evaluations;
      return f(std::span<const double>(point.data(), d));
    }
    return level(1);
  };
  const QuadratureResult r = integrate(outer, domains[0], options);
  const double inner_relative = inner_peak > 0.0 ? inner_error / inner_peak : 0.0;
  return QuadratureResult{r.value, r.error_estimate + std::abs(r.value) * inner_relative, evaluations};
}

namespace {

// Scans log_f on a fixed set of points of every piece and returns the max.
double scan_reference(const Integrand& log_f, const Domain& domain) {
  double best = -kInf;
  for (const PieceMap& map : pieces_for(domain)) {
    std::vector<double> ts;
    for (int i = 0; i < 32; ++i) ts.push_back((i + 0.5) / 32.0);
    for (int k = 6; k <= 40; k += 2) {
      ts.push_back(std::ldexp(1.0, -k));
      ts.push_back(1.0 - std::ldexp(1.0, -k));
    }
    for (double t : ts) {
      const double x = map(t).first;
      if (!std::isfinite(x)) continue;
      const double v = log_f(x);
      if (std::isfinite(v)) best = std::max(best, v);
    }
  }
  return best;
}

}  // namespace

LogQuadratureResult integrate_log(const Integrand& log_f, const Domain& domain,
                                  const QuadratureOptions& options) {
  double reference = scan_reference(log_f, domain);
  if (!std::isfinite(reference)) return LogQuadratureResult{-kInf, 0.0, 0};
  std::size_t evaluations = 0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      Integrand shifted = [&](double x) {
        const double v = log_f(x) - reference;
        if (v > 600.0) throw ReferenceTooLow{v + reference};
        return std::exp(v);
      };
      const QuadratureResult r = integrate(shifted, domain, options);
      evaluations += r.evaluations;
      if (!(r.value > 0.0)) return LogQuadratureResult{-kInf, 0.0, evaluations};
      return LogQuadratureResult{reference + std::log(r.value), r.error_estimate / r.value,
                                 evaluations};
    } catch (const ReferenceTooLow& raised) {
      reference = raised.level;
    }
  }
  throw NonConvergence("integrate_log: could not find a stable reference level");
}

LogQuadratureResult integrate_log_windows(const Integrand& log_f, const Domain& domain,
                                          double center, const WindowOptions& options) {
  const bool lower_inf = domain.lower_infinite();
  const bool upper_inf = domain.upper_infinite();
  if (!lower_inf && !upper_inf) return integrate_log(log_f, domain, options.quadrature);
  if (!(center > domain.lower && center < domain.upper)) {
    throw DomainError("integrate_log_windows: center must lie inside the domain");
  }

  // Window edges as a function of the shell index: half-lines double the
  // distance to the finite endpoint, the real line doubles the half-width.
  const bool real_line = lower_inf && upper_inf;
  const double anchor = real_line ? center : (lower_inf ? domain.upper : domain.lower);
  const double base = real_line ? domain.scale : std::abs(center - anchor);
  const double sign = lower_inf && !real_line ? -1.0 : 1.0;

  auto edge = [&](int k, bool outward) {
    // outward: away from the anchor (towards infinity); inward: towards it.
    if (real_line) return outward ? center + base * std::ldexp(1.0, k)
                                  : center - base * std::ldexp(1.0, k);
    return anchor + sign * base * std::ldexp(1.0, outward ? k : -k);
  };

  double reference = log_f(center);
  if (!std::isfinite(reference)) reference = scan_reference(log_f, domain);
  if (!std::isfinite(reference)) return LogQuadratureResult{-kInf, 0.0, 0};

  double total = 0.0;  // in units of exp(reference)
  double error = 0.0;
  std::size_t evaluations = 0;

  auto shell = [&](double a, double b) -> double {
    if (a > b) std::swap(a, b);
    if (!(a < b)) return 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      try {
        Integrand shifted = [&](double x) {
          const double v = log_f(x) - reference;
          if (v > 600.0) throw ReferenceTooLow{v + reference};
          return std::exp(v);
        };
        QuadratureOptions q = options.quadrature;
        q.endpoint_levels = 0;
        // Shells are resolved relative to what has been accumulated so far;
        // rounding alone rules out an absolute target once total is large.
        q.abs_tol = std::max(options.quadrature.abs_tol * 1e-2,
                             std::max(options.quadrature.rel_tol * 1e-2, 1e-14) * std::abs(total));
        const QuadratureResult r = integrate(shifted, Domain::finite(a, b), q);
        evaluations += r.evaluations;
        error += r.error_estimate;
        total += r.value;
        return r.value;
      } catch (const ReferenceTooLow& raised) {
        const double scale = std::exp(reference - raised.level);
        total *= scale;
        error *= scale;
        reference = raised.level;
      }
    }
    throw NonConvergence("integrate_log_windows: could not find a stable reference level");
  };

  const double tol_abs = options.quadrature.abs_tol;
  const double tol_rel = options.quadrature.rel_tol;
  auto negligible = [&](double piece) {
    return std::abs(piece) <= options.tail_fraction * std::max(tol_abs, tol_rel * std::abs(total));
  };

  // Core window.
  if (real_line) {
    shell(edge(0, false), edge(0, true));
  } else {
    shell(edge(1, false), edge(1, true));
  }

  auto grow = [&](bool outward) {
    int quiet = 0;
    for (int k = 1; k <= options.max_shells; ++k) {
      double a = 0.0;
      double b = 0.0;
      if (real_line) {
        a = outward ? edge(k - 1, true) : edge(k, false);
        b = outward ? edge(k, true) : edge(k - 1, false);
      } else {
        a = outward ? edge(k, true) : edge(k + 1, false);
        b = outward ? edge(k + 1, true) : edge(k, false);
      }
      if (!std::isfinite(a) || !std::isfinite(b) || a == b) return;
      const double piece = shell(a, b);
      // Two consecutive negligible shells end this side.
      if (negligible(piece)) {
        if (++quiet >= 2) return;
      } else {
        quiet = 0;
      }
    }
    throw NonIntegrable("integrate_log_windows: integrand does not decay on the " +
                            std::string(outward ? "outer" : "inner") + " side",
                        total, error, evaluations);
  };
  grow(true);
  // A finite endpoint on a half-line: shells shrink towards it; on the real
  // line the "inward" direction is the negative side.
  grow(false);

  if (!(total > 0.0)) return LogQuadratureResult{-kInf, 0.0, evaluations};
  return LogQuadratureResult{reference + std::log(total), error / total, evaluations};
}

LogQuadratureResult integrate_log_box(const std::function<double(std::span<const double>)>& log_f,
                                      std::span<const double> center, std::span<const double> scales,
                                      const QuadratureOptions& options) {
  if (center.size() != scales.size()) throw DomainError("integrate_log_box: size mismatch");
  const double reference = log_f(center);
  if (!std::isfinite(reference)) throw DomainError("integrate_log_box: log_f not finite at center");
  std::vector<Domain> domains;
  double volume = 1.0;
  for (std::size_t i = 0; i < center.size(); ++i) {
    domains.push_back(Domain::real_line(center[i], scales[i]));
    volume *= scales[i];
  }
  QuadratureOptions q = options;
  // The shifted integrand peaks near 1, so the integral is of order `volume`.
  q.abs_tol = std::max(options.abs_tol, options.rel_tol * volume);
  q.rel_tol = 0.0;
  const QuadratureResult r = integrate_box(
      [&](std::span<const double> x) {
        const double v = log_f(x) - reference;
        if (v > 600.0) throw NonConvergence("integrate_log_box: center is far from the peak");
        return std::exp(v);
      },
      domains, q);
  if (!(r.value > 0.0)) return LogQuadratureResult{-kInf, 0.0, r.evaluations};
  return LogQuadratureResult{reference + std::log(r.value), r.error_estimate / r.value, r.evaluations};
}

}  // namespace expfam::numerics
