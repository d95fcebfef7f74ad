#include "robce/mixture.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace robce {

void GaussianMixture::validate() const {
  const int m = components();
  if (m < 1) {
    throw Error("mixture needs at least one component");
  }
  if (static_cast<int>(means.size()) != m ||
      static_cast<int>(covariances.size()) != m) {
    throw DimensionMismatch("mixture component lists differ in length");
  }
  if (weights.minCoeff() <= 0.0) {
    throw Error("mixture weights must be positive");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-9) {
    throw Error("mixture weights must sum to one");
  }
  const int d = dim();
  for (int i = 0; i < m; ++i) {
    if (means[i].size() != d) {
      throw DimensionMismatch("mixture means differ in dimension");
    }
    NoiseModel check(means[i], covariances[i]);  // SPD validation
    (void)check;
  }
}

Vector GaussianMixture::weighted_log_densities(const Vector& x) const {
  if (x.size() != dim()) {
    throw DimensionMismatch("point dimension does not match mixture");
  }
  const int m = components();
  const int d = dim();
  Vector out(m);
  for (int i = 0; i < m; ++i) {
    Eigen::LLT<Matrix> llt(covariances[i]);
    if (llt.info() != Eigen::Success) {
      throw NonPositiveDefinite("mixture covariance not SPD");
    }
    const Matrix l = llt.matrixL();
    double log_det = 0.0;
    for (int k = 0; k < d; ++k) {
      log_det += 2.0 * std::log(l(k, k));
    }
    const Vector z = llt.matrixL().solve(x - means[i]);
    out(i) = std::log(weights(i)) - 0.5 * d * std::log(2.0 * M_PI) -
             0.5 * log_det - 0.5 * z.squaredNorm();
  }
  return out;
}

Vector predict_responsibility(const Vector& x, const GaussianMixture& mix) {
  Vector log_p = mix.weighted_log_densities(x);
  const double m = log_p.maxCoeff();
  Vector p = (log_p.array() - m).exp();
  return p / p.sum();
}

}  // namespace robce
