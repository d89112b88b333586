#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "expfam/core.hpp"
#include "expfam/errors.hpp"

namespace expfam {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Family::Family(Spec spec) : spec_(std::move(spec)) {}

Family Family::gamma(double alpha) {
  require_positive(alpha, "Gamma shape alpha");
  return Family(GammaShape{alpha});
}

Family Family::gaussian(const Matrix& cov) {
  if (cov.rows() == 0 || cov.rows() != cov.cols()) {
    throw DomainError("Gaussian covariance must be a nonempty square matrix");
  }
  if (!cov.allFinite() || (cov - cov.transpose()).cwiseAbs().maxCoeff() >
                              1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff())) {
    throw DomainError("Gaussian covariance must be symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
    throw DomainError("Gaussian covariance must be positive definite");
  }
  Family fam(GaussianLocation{cov});
  fam.cov_inverse_ = cov.llt().solve(Matrix::Identity(cov.rows(), cov.cols()));
  fam.log_det_cov_ = eig.eigenvalues().array().log().sum();
  return fam;
}

Family Family::gaussian(double variance) {
  require_positive(variance, "Gaussian variance");
  return gaussian(Matrix::Constant(1, 1, variance));
}

Family Family::inverse_gaussian(double kappa) {
  require_positive(kappa, "inverse Gaussian shape kappa");
  return Family(InverseGaussianShape{kappa});
}

Family Family::poisson_exponential(double kappa) {
  require_positive(kappa, "Poisson-exponential shape kappa");
  return Family(PoissonExponentialShape{kappa});
}

FamilyKind Family::kind() const {
  return std::visit(Overloaded{
                        [](const GammaShape&) { return FamilyKind::Gamma; },
                        [](const GaussianLocation&) { return FamilyKind::GaussianLocation; },
                        [](const InverseGaussianShape&) { return FamilyKind::InverseGaussian; },
                        [](const PoissonExponentialShape&) {
                          return FamilyKind::PoissonExponential;
                        },
                    },
                    spec_);
}

int Family::dimension() const {
  if (const auto* g = std::get_if<GaussianLocation>(&spec_)) return static_cast<int>(g->cov.rows());
  return 1;
}

double Family::shape() const {
  return std::visit(Overloaded{
                        [](const GammaShape& s) { return s.alpha; },
                        [](const GaussianLocation&) -> double {
                          throw DomainError("Gaussian location family has no shape parameter");
                        },
                        [](const InverseGaussianShape& s) { return s.kappa; },
                        [](const PoissonExponentialShape& s) { return s.kappa; },
                    },
                    spec_);
}

const Matrix& Family::cov() const {
  if (const auto* g = std::get_if<GaussianLocation>(&spec_)) return g->cov;
  throw DomainError("covariance hyperparameter exists only for the Gaussian location family");
}

const Matrix& Family::cov_inverse() const {
  cov();
  return cov_inverse_;
}

double Family::log_det_cov() const {
  cov();
  return log_det_cov_;
}

std::string Family::name() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind()) {
    case FamilyKind::Gamma:
      out << "gamma(alpha=" << shape() << ")";
      break;
    case FamilyKind::GaussianLocation: {
      out << "gaussian(cov=[";
      const Matrix& b = cov();
      for (Eigen::Index i = 0; i < b.size(); ++i) out << (i ? "," : "") << b(i / b.cols(), i % b.cols());
      out << "])";
      break;
    }
    case FamilyKind::InverseGaussian:
      out << "inverse-gaussian(kappa=" << shape() << ")";
      break;
    case FamilyKind::PoissonExponential:
      out << "poisson-exp(kappa=" << shape() << ")";
      break;
  }
  return out.str();
}

bool operator==(const Family& a, const Family& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == FamilyKind::GaussianLocation) {
    return a.cov().rows() == b.cov().rows() && a.cov() == b.cov();
  }
  return a.shape() == b.shape();
}

double NaturalParam::scalar() const {
  if (theta_.size() != 1) throw DomainError("NaturalParam::scalar on a multivariate parameter");
  return theta_(0);
}

double MeanParam::scalar() const {
  if (mu_.size() != 1) throw DomainError("MeanParam::scalar on a multivariate parameter");
  return mu_(0);
}

ObservationBatch ObservationBatch::from_values(std::span<const double> values) {
  if (values.empty()) throw DomainError("ObservationBatch needs at least one observation");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double sum = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  ObservationBatch batch;
  batch.n = values.size();
  batch.xbar = point(sum / static_cast<double>(values.size()));
  batch.raw.reserve(values.size());
  for (double v : values) batch.raw.push_back(point(v));
  return batch;
}

ObservationBatch ObservationBatch::from_points(std::vector<Vector> points) {
  if (points.empty()) throw DomainError("ObservationBatch needs at least one observation");
  const Eigen::Index d = points.front().size();
  for (const Vector& p : points) {
    if (p.size() != d) throw DomainError("ObservationBatch points must share one dimension");
  }
  std::vector<Vector> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  Vector sum = Vector::Zero(d);
  for (const Vector& p : sorted) sum += p;
  ObservationBatch batch;
  batch.n = points.size();
  batch.xbar = sum / static_cast<double>(points.size());
  batch.raw = std::move(points);
  return batch;
}

ObservationBatch ObservationBatch::summary(std::size_t n, Vector xbar) {
  if (n == 0) throw DomainError("ObservationBatch needs n >= 1");
  ObservationBatch batch;
  batch.n = n;
  batch.xbar = std::move(xbar);
  return batch;
}

ObservationBatch ObservationBatch::summary(std::size_t n, double xbar) {
  return summary(n, point(xbar));
}

double ObservationBatch::xbar_scalar() const {
  if (xbar.size() != 1) throw DomainError("ObservationBatch::xbar_scalar on multivariate data");
  return xbar(0);
}

}  // namespace expfam
