#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "robce/errors.hpp"

namespace robce {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Per-epoch platform states being estimated: a 2D or 3D position plus a
/// clock-like bias, all in meters. One state vector per epoch, stored as the
/// rows of an epochs x (position_dim + 1) matrix.
class StateTrajectory {
 public:
  StateTrajectory(int epochs, int position_dim);

  /// Trajectory with every epoch set to the same state vector.
  static StateTrajectory constant(int epochs, const Vector& state);

  int epochs() const { return static_cast<int>(states_.rows()); }
  int position_dim() const { return position_dim_; }
  int state_dim() const { return position_dim_ + 1; }

  Eigen::Ref<Vector> state(int epoch) { return states_.row(epoch).transpose(); }
  Vector state(int epoch) const { return states_.row(epoch).transpose(); }
  void set_state(int epoch, const Vector& value);

  Vector position(int epoch) const {
    return states_.row(epoch).head(position_dim_).transpose();
  }
  double bias(int epoch) const { return states_(epoch, position_dim_); }
  void set_bias(int epoch, double value) { states_(epoch, position_dim_) = value; }

  /// Epoch-major concatenation of all state vectors (the solver's layout).
  Vector flattened() const;
  void set_flattened(const Vector& x);

  bool all_finite() const { return states_.allFinite(); }

  const Matrix& as_matrix() const { return states_; }

 private:
  int position_dim_;
  Matrix states_;
};

enum class ObservationKind { kRange, kPhaseLike, kPrior, kBetween };

std::string to_string(ObservationKind kind);
ObservationKind observation_kind_from_string(const std::string& name);

/// Named metadata entries attached to one observation (e.g. elevation_deg,
/// azimuth_deg, signal_strength_dbhz). Names must be unique and values finite.
struct FeatureVector {
  std::vector<std::string> names;
  Vector values;

  FeatureVector() : values(0) {}
  FeatureVector(std::vector<std::string> n, Vector v);

  int size() const { return static_cast<int>(names.size()); }
  bool empty() const { return names.empty(); }
  void validate() const;
};

/// One measurement or prior term read from data. range/phase_like carry a
/// beacon position; prior/between do not.
struct Observation {
  int epoch_index = 0;
  ObservationKind kind = ObservationKind::kRange;
  Vector value;
  std::optional<Vector> beacon;
  FeatureVector metadata;
};

/// Gaussian noise model with an optional nonzero mean. The mean defaults to
/// zero and is overwritten when the pipeline installs learned component
/// statistics into a factor.
class NoiseModel {
 public:
  /// Throws NonPositiveDefinite unless covariance is symmetric (1e-9 relative)
  /// with strictly positive eigenvalues.
  NoiseModel(Vector mean, Matrix covariance);

  static NoiseModel isotropic(int dim, double sigma);
  static NoiseModel diagonal(const Vector& variances);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }

  /// L^-1 (r - mean) where covariance = L L^T; its squared norm is the
  /// Mahalanobis term of the weighted NLLS objective.
  Vector whiten(const Vector& r) const;
  /// L^-1 J, the whitening applied to a residual Jacobian block.
  Matrix whiten_jacobian(const Matrix& jacobian) const;

  double squared_mahalanobis(const Vector& r) const;

  bool same_as(const NoiseModel& other) const;

 private:
  Vector mean_;
  Matrix covariance_;
  Matrix sqrt_lower_;  // L with covariance = L L^T
};

}  // namespace robce
