#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace expfam {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// 2 pi.
inline constexpr double tau = 2.0 * std::numbers::pi;

enum class FamilyKind { Gamma, GaussianLocation, InverseGaussian, PoissonExponential };

struct GammaShape {
  double alpha;
};
struct GaussianLocation {
  Matrix cov;
};
struct InverseGaussianShape {
  double kappa;
};
struct PoissonExponentialShape {
  double kappa;
};

/// One of the four concrete natural exponential families together with its
/// fixed hyperparameters. Immutable once built; the factories validate the
/// hyperparameters (positive shapes, symmetric positive-definite covariance).
///
/// Natural parametrizations used throughout:
///   Gamma(alpha)            theta = -rate < 0,  A = -alpha ln(-theta)
///   GaussianLocation(B)     theta in R^d,        A = theta.B.theta / 2, mean B theta
///   InverseGaussian(kappa)  theta < 0,           A = -(-2 kappa theta)^{1/2}
///   PoissonExponential(k)   theta = -rate < 0,   A = kappa / (2 (-theta))
class Family {
 public:
  using Spec = std::variant<GammaShape, GaussianLocation, InverseGaussianShape,
                            PoissonExponentialShape>;

  static Family gamma(double alpha);
  static Family gaussian(const Matrix& cov);
  static Family gaussian(double variance);
  static Family inverse_gaussian(double kappa);
  static Family poisson_exponential(double kappa);

  FamilyKind kind() const;
  int dimension() const;
  const Spec& spec() const { return spec_; }

  /// alpha for Gamma, kappa for the inverse Gaussian and Poisson-exponential
  /// families. DomainError for the Gaussian family.
  double shape() const;
  /// Covariance B of the Gaussian location family (DomainError otherwise).
  const Matrix& cov() const;
  const Matrix& cov_inverse() const;
  double log_det_cov() const;

  /// Poisson-exponential observations put positive mass on x = 0.
  bool has_atom() const { return kind() == FamilyKind::PoissonExponential; }
  std::string name() const;

  friend bool operator==(const Family& a, const Family& b);

 private:
  explicit Family(Spec spec);

  Spec spec_;
  Matrix cov_inverse_;
  double log_det_cov_ = 0.0;
};

/// Point of the natural domain.
class NaturalParam {
 public:
  explicit NaturalParam(double theta) : theta_(Vector::Constant(1, theta)) {}
  explicit NaturalParam(Vector theta) : theta_(std::move(theta)) {}

  const Vector& theta() const { return theta_; }
  double scalar() const;
  Eigen::Index size() const { return theta_.size(); }

 private:
  Vector theta_;
};

/// Point of the mean domain.
class MeanParam {
 public:
  explicit MeanParam(double mu) : mu_(Vector::Constant(1, mu)) {}
  explicit MeanParam(Vector mu) : mu_(std::move(mu)) {}

  const Vector& mu() const { return mu_; }
  double scalar() const;
  Eigen::Index size() const { return mu_.size(); }

 private:
  Vector mu_;
};

/// Sufficient summary of iid observations: count and average. `raw` keeps
/// the observations themselves when carrier terms are needed.
struct ObservationBatch {
  std::size_t n = 0;
  Vector xbar;
  std::vector<Vector> raw;

  /// Averages are summed in sorted order so that any permutation of the
  /// same observations yields a bit-identical xbar.
  static ObservationBatch from_values(std::span<const double> values);
  static ObservationBatch from_points(std::vector<Vector> points);
  static ObservationBatch summary(std::size_t n, Vector xbar);
  static ObservationBatch summary(std::size_t n, double xbar);

  bool has_raw() const { return !raw.empty(); }
  double xbar_scalar() const;
  MeanParam mean() const { return MeanParam(xbar); }
};

/// Wraps a scalar observation as a 1-vector.
inline Vector point(double x) { return Vector::Constant(1, x); }

bool in_natural_domain(const Family& fam, const NaturalParam& theta);
bool in_mean_domain(const Family& fam, const Vector& x);
bool in_support(const Family& fam, const Vector& x);

/// Cumulant generating function A(theta). DomainError outside Theta.
double cumulant(const Family& fam, const NaturalParam& theta);

/// Mean map grad A(theta).
MeanParam mean_from_natural(const Family& fam, const NaturalParam& theta);

/// Hessian of A, i.e. the covariance of the sufficient statistic.
Matrix covariance(const Family& fam, const NaturalParam& theta);

/// Maximum likelihood estimate: the solution of grad A(theta) = xbar.
/// Closed forms for all four families.
NaturalParam mle(const Family& fam, const MeanParam& xbar);

/// Same estimate obtained by root finding on the mean map (linear solve for
/// the multivariate Gaussian).
NaturalParam mle_numeric(const Family& fam, const MeanParam& xbar, double tol = 1e-15);

/// D_A(theta2, theta1) = A(theta2) - A(theta1) - (theta2 - theta1).grad A(theta1).
double bregman(const Family& fam, const NaturalParam& theta2, const NaturalParam& theta1);

/// D(P_theta1 || P_theta2), which equals bregman(theta2, theta1).
double kl_divergence(const Family& fam, const NaturalParam& theta1, const NaturalParam& theta2);

/// A*(x) = sup_theta {theta.x - A(theta)}, attained at the MLE.
double convex_conjugate(const Family& fam, const MeanParam& x);

/// |Cov(mu_theta)|^{1/2}.
double jeffreys_unnormalized(const Family& fam, const NaturalParam& theta);
double log_jeffreys(const Family& fam, const NaturalParam& theta);

/// Log of the base-measure density so that log_density is taken with respect
/// to Lebesgue measure (plus counting measure on the Poisson-exponential atom
/// at 0). SupportError outside the support.
double log_carrier(const Family& fam, const Vector& x);

/// theta.x - A(theta) + log_carrier(x).
double log_density(const Family& fam, const NaturalParam& theta, const Vector& x);
double density(const Family& fam, const NaturalParam& theta, const Vector& x);

/// p_theta(x) / p_thetahat(x)(x) computed as exp(-D_A(theta, thetahat(x))).
double robustness_ratio(const Family& fam, const NaturalParam& theta, const Vector& x);

/// log of sum_{k>=1} (kappa/2)^k x^{k-1} / (k! (k-1)!), the continuous part of
/// the Poisson-exponential base measure. Terms are summed in log space around
/// the largest one until they fall below 1e-17 of the running sum.
double log_poisson_exponential_series(double kappa, double x);

}  // namespace expfam
