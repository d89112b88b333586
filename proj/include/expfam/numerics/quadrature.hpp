#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

namespace expfam::numerics {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |Kronrod - Gauss| summed over segments
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_evaluations = 1'000'000;
  // Number of geometric breakpoints placed towards each endpoint before
  // adaptive bisection starts (resolves power-type endpoint singularities).
  int endpoint_levels = 6;
};

/// Integration domain. Infinite bounds are mapped onto finite ones with
/// x = a + scale * t / (1 - t); the real line is split at `center`.
struct Domain {
  double lower = 0.0;
  double upper = 1.0;
  double scale = 1.0;
  double center = 0.0;

  static Domain finite(double a, double b);
  static Domain half_line(double a, double scale = 1.0);
  static Domain negative_half_line(double b, double scale = 1.0);
  static Domain real_line(double center = 0.0, double scale = 1.0);

  bool lower_infinite() const { return lower == -std::numeric_limits<double>::infinity(); }
  bool upper_infinite() const { return upper == std::numeric_limits<double>::infinity(); }
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (10/21) integration with global error control.
/// Throws NonConvergence when the error estimate is still above
/// max(abs_tol, rel_tol * |value|) once the evaluation budget is spent.
QuadratureResult integrate(const Integrand& f, const Domain& domain,
                           const QuadratureOptions& options = {});

/// Iterated integration over an axis-aligned box (d <= 3).
QuadratureResult integrate_box(const std::function<double(std::span<const double>)>& f,
                               std::span<const Domain> domains,
                               const QuadratureOptions& options = {});

struct LogQuadratureResult {
  double log_value = 0.0;
  double relative_error = 0.0;
  std::size_t evaluations = 0;
};

/// log of the integral of exp(log_f) over a domain. The integrand is shifted
/// by a reference level found by scanning, so no intermediate overflows.
LogQuadratureResult integrate_log(const Integrand& log_f, const Domain& domain,
                                  const QuadratureOptions& options = {});

struct WindowOptions {
  QuadratureOptions quadrature{};
  // A side stops growing once its newest shell contributes less than this
  // fraction of the tolerance.
  double tail_fraction = 1e-3;
  int max_shells = 400;
};

/// log of the integral of exp(log_f) over an unbounded domain, computed over
/// windows around `center` that grow geometrically (doubling distance to the
/// finite endpoint on half-lines, doubling width on the real line). Throws
/// NonIntegrable if a side never becomes negligible.
LogQuadratureResult integrate_log_windows(const Integrand& log_f, const Domain& domain,
                                          double center, const WindowOptions& options = {});

/// log of the integral of exp(log_f) over a box of real lines (d <= 3),
/// shifted by log_f(center). `scales` sets the width of each coordinate's
/// variable transform. Accuracy is relative (options.rel_tol).
LogQuadratureResult integrate_log_box(const std::function<double(std::span<const double>)>& log_f,
                                      std::span<const double> center, std::span<const double> scales,
                                      const QuadratureOptions& options = {});

}  // namespace expfam::numerics
