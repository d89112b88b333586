#pragma once

#include <functional>

namespace expfam::numerics {

/// Closed interval [lo, hi] with lo < hi.
class Bracket {
 public:
  Bracket(double lo, double hi);
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Safeguarded regula-falsi / bisection hybrid. Requires a sign change on the
/// bracket (NoSignChange otherwise). Returns x with the bracketing interval
/// shrunk to width <= 2 * (tol + 4 eps |x|). Throws NonConvergence after
/// `max_iterations`.
double find_root(const std::function<double(double)>& f, const Bracket& bracket,
                 double tol = 1e-14, int max_iterations = 400);

/// Grows [lo, hi] geometrically within (lower_limit, upper_limit) until f
/// changes sign. For positive half-lines pass lower_limit = 0: the lower end
/// is halved and the upper end doubled. Throws NoSignChange on failure.
Bracket expand_bracket(const std::function<double(double)>& f, double lo, double hi,
                       double lower_limit, double upper_limit, int max_steps = 200);

}  // namespace expfam::numerics
