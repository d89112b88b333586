#include "expfam/numerics/roots.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "expfam/errors.hpp"

namespace expfam::numerics {

Bracket::Bracket(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw DomainError("Bracket: lo must be below hi");
}

double find_root(const std::function<double(double)>& f, const Bracket& bracket, double tol,
                 int max_iterations) {
  if (!(tol >= 0.0)) throw DomainError("find_root: tol must be nonnegative");
  double a = bracket.lo();
  double b = bracket.hi();
  double fa = f(a);
  double fb = f(b);
  if (std::isnan(fa) || std::isnan(fb)) throw DomainError("find_root: f is NaN at the bracket");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb)) {
    throw NoSignChange("find_root: no sign change on [" + std::to_string(a) + ", " +
                       std::to_string(b) + "]");
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double previous_width = 2.0 * (b - a);
  for (int it = 0; it < max_iterations; ++it) {
    const double width = b - a;
    const double scale = tol + 4.0 * eps * std::max(std::abs(a), std::abs(b));
    if (width <= 2.0 * scale) return std::abs(fa) < std::abs(fb) ? a : b;

    // Secant through the bracket ends, unless the bracket stopped halving.
    double x = a - fa * (b - a) / (fb - fa);
    const bool stalled = width > 0.5 * previous_width;
    if (!(x > a + 0.5 * scale && x < b - 0.5 * scale) || stalled) {
      x = 0.5 * (a + b);
    }
    previous_width = width;

    const double fx = f(x);
    if (std::isnan(fx)) throw DomainError("find_root: f is NaN at x=" + std::to_string(x));
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(fa)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }
  throw NonConvergence("find_root: iteration budget exhausted", 0.5 * (a + b), b - a,
                       static_cast<std::size_t>(max_iterations));
}

Bracket expand_bracket(const std::function<double(double)>& f, double lo, double hi,
                       double lower_limit, double upper_limit, int max_steps) {
  if (!(lo < hi)) throw DomainError("expand_bracket: lo must be below hi");
  double flo = f(lo);
  double fhi = f(hi);
  for (int step = 0; step < max_steps; ++step) {
    if (std::signbit(flo) != std::signbit(fhi) || flo == 0.0 || fhi == 0.0) return {lo, hi};
    // Move the end whose value is closer to zero, which is nearer the root
    // for a monotone f.
    const bool move_lo = std::abs(flo) < std::abs(fhi);
    if (move_lo) {
      const double next = (lower_limit == 0.0 && lo > 0.0) ? 0.5 * lo
                                                           : lo - 2.0 * (hi - lo);
      if (!(next > lower_limit)) break;
      hi = lo;
      fhi = flo;
      lo = next;
      flo = f(lo);
    } else {
      const double next = (lower_limit == 0.0 && hi > 0.0) ? 2.0 * hi : hi + 2.0 * (hi - lo);
      if (!(next < upper_limit)) break;
      lo = hi;
      flo = fhi;
      hi = next;
      fhi = f(hi);
    }
  }
  throw NoSignChange("expand_bracket: no sign change found");
}

}  // namespace expfam::numerics
