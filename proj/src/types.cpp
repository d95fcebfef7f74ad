#include "robce/types.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <set>

namespace robce {

StateTrajectory::StateTrajectory(int epochs, int position_dim)
    : position_dim_(position_dim) {
  if (epochs < 1) {
    throw Error("StateTrajectory requires at least one epoch");
  }
  if (position_dim != 2 && position_dim != 3) {
    throw DimensionMismatch("position dimension must be 2 or 3");
  }
  states_ = Matrix::Zero(epochs, position_dim + 1);
}

StateTrajectory StateTrajectory::constant(int epochs, const Vector& state) {
  StateTrajectory out(epochs, static_cast<int>(state.size()) - 1);
  for (int e = 0; e < epochs; ++e) {
    out.set_state(e, state);
  }
  return out;
}

void StateTrajectory::set_state(int epoch, const Vector& value) {
  if (value.size() != state_dim()) {
    throw DimensionMismatch("state vector size does not match trajectory");
  }
  states_.row(epoch) = value.transpose();
}

Vector StateTrajectory::flattened() const {
  Vector x(states_.size());
  for (int e = 0; e < epochs(); ++e) {
    x.segment(e * state_dim(), state_dim()) = states_.row(e).transpose();
  }
  return x;
}

void StateTrajectory::set_flattened(const Vector& x) {
  if (x.size() != states_.size()) {
    throw DimensionMismatch("flattened state size mismatch");
  }
  for (int e = 0; e < epochs(); ++e) {
    states_.row(e) = x.segment(e * state_dim(), state_dim()).transpose();
  }
}

std::string to_string(ObservationKind kind) {
  switch (kind) {
    case ObservationKind::kRange:
      return "range";
    case ObservationKind::kPhaseLike:
      return "phase_like";
    case ObservationKind::kPrior:
      return "prior";
    case ObservationKind::kBetween:
      return "between";
  }
  return "unknown";
}

ObservationKind observation_kind_from_string(const std::string& name) {
  if (name == "range") return ObservationKind::kRange;
  if (name == "phase_like") return ObservationKind::kPhaseLike;
  if (name == "prior") return ObservationKind::kPrior;
  if (name == "between") return ObservationKind::kBetween;
  throw Error("unknown observation kind: " + name);
}

FeatureVector::FeatureVector(std::vector<std::string> n, Vector v)
    : names(std::move(n)), values(std::move(v)) {
  validate();
}

void FeatureVector::validate() const {
  if (static_cast<int>(names.size()) != values.size()) {
    throw DimensionMismatch("feature names and values differ in length");
  }
  if (!values.allFinite()) {
    throw NonFiniteData("feature values must be finite");
  }
  std::set<std::string> unique(names.begin(), names.end());
  if (unique.size() != names.size()) {
    throw Error("feature names must be unique within a vector");
  }
}

namespace {

Matrix validated_covariance(const Matrix& covariance) {
  if (covariance.rows() != covariance.cols() || covariance.rows() < 1) {
    throw DimensionMismatch("covariance must be square and non-empty");
  }
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw NonPositiveDefinite("covariance is not symmetric");
  }
  Matrix sym = 0.5 * (covariance + covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw NonPositiveDefinite("covariance has a non-positive eigenvalue");
  }
  return sym;
}

}  // namespace

NoiseModel::NoiseModel(Vector mean, Matrix covariance)
    : mean_(std::move(mean)), covariance_(validated_covariance(covariance)) {
  if (mean_.size() != covariance_.rows()) {
    throw DimensionMismatch("noise mean and covariance dimensions differ");
  }
  if (!mean_.allFinite()) {
    throw NonFiniteData("noise mean must be finite");
  }
  Eigen::LLT<Matrix> llt(covariance_);
  if (llt.info() != Eigen::Success) {
    throw NonPositiveDefinite("covariance Cholesky factorization failed");
  }
  sqrt_lower_ = llt.matrixL();
}

NoiseModel NoiseModel::isotropic(int dim, double sigma) {
  return NoiseModel(Vector::Zero(dim),
                    Matrix::Identity(dim, dim) * (sigma * sigma));
}

NoiseModel NoiseModel::diagonal(const Vector& variances) {
  return NoiseModel(Vector::Zero(variances.size()),
                    Matrix(variances.asDiagonal()));
}

Vector NoiseModel::whiten(const Vector& r) const {
  if (r.size() != dim()) {
    throw DimensionMismatch("residual dimension does not match noise model");
  }
  return sqrt_lower_.triangularView<Eigen::Lower>().solve(r - mean_);
}

Matrix NoiseModel::whiten_jacobian(const Matrix& jacobian) const {
  if (jacobian.rows() != dim()) {
    throw DimensionMismatch("jacobian rows do not match noise model");
  }
  return sqrt_lower_.triangularView<Eigen::Lower>().solve(jacobian);
}

double NoiseModel::squared_mahalanobis(const Vector& r) const {
  return whiten(r).squaredNorm();
}

bool NoiseModel::same_as(const NoiseModel& other) const {
  return mean_.size() == other.mean_.size() && mean_ == other.mean_ &&
         covariance_ == other.covariance_;
}

}  // namespace robce
