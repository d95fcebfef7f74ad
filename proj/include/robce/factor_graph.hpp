#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "robce/types.hpp"

namespace robce {

enum class FactorKind { kPrior, kBetween, kRange, kPhaseLike };

/// One term of the weighted NLLS objective: a residual function selected by
/// kind, the epochs it touches and the active noise model.
class Factor {
 public:
  Factor(FactorKind kind, std::vector<int> epochs, Vector value,
         std::optional<Vector> beacon, NoiseModel noise,
         int observation_index = -1);

  FactorKind kind() const { return kind_; }
  const std::vector<int>& epochs() const { return epochs_; }
  const Vector& value() const { return value_; }
  const std::optional<Vector>& beacon() const { return beacon_; }
  const NoiseModel& noise() const { return noise_; }
  void set_noise(NoiseModel noise);
  int observation_index() const { return observation_index_; }

  int residual_dim() const { return static_cast<int>(value_.size()); }
  bool is_measurement() const {
    return kind_ == FactorKind::kRange || kind_ == FactorKind::kPhaseLike;
  }

 private:
  FactorKind kind_;
  std::vector<int> epochs_;
  Vector value_;
  std::optional<Vector> beacon_;
  NoiseModel noise_;
  int observation_index_;
};

/// Factor-graph representation of the estimation problem: a trajectory
/// template plus the prior, between and measurement factors built from the
/// observations. Immutable during evaluation; noise models are replaced
/// between solves by the robust estimators.
class FactorGraph {
 public:
  FactorGraph(int epochs, int position_dim, std::vector<Factor> factors,
              std::vector<Observation> observations);

  int epochs() const { return epochs_; }
  int position_dim() const { return position_dim_; }
  int state_dim() const { return position_dim_ + 1; }

  const std::vector<Factor>& factors() const { return factors_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }
  Factor& factor(int i) { return factors_[i]; }
  const Factor& factor(int i) const { return factors_[i]; }

  /// Indices of range/phase_like factors, in factor order.
  std::vector<int> measurement_factor_indices() const;

  const std::vector<Observation>& observations() const { return observations_; }

  StateTrajectory make_trajectory() const {
    return StateTrajectory(epochs_, position_dim_);
  }

 private:
  int epochs_;
  int position_dim_;
  std::vector<Factor> factors_;
  std::vector<Observation> observations_;
};

/// Builds the graph: one prior factor on epoch 0, one between factor per
/// consecutive epoch pair (constant-position motion model) and one measurement
/// factor per range/phase_like observation. Explicit prior/between
/// observations become additional factors of the matching kind.
///
/// Throws EmptyProblem when observations is empty and DisconnectedGraph when
/// an observation addresses an epoch outside the trajectory.
FactorGraph build_graph(const std::vector<Observation>& observations,
                        const Vector& prior_mean, const NoiseModel& prior_noise,
                        const NoiseModel& motion_noise,
                        std::optional<int> epochs = std::nullopt);

/// r_n(X) = y_n - h_n(X). For range factors h is ||position - beacon|| + bias.
Vector residual(const Factor& factor, const StateTrajectory& x);

/// L^-1 (r - mean) under the factor's noise model.
Vector whitened_residual(const Factor& factor, const StateTrajectory& x);

/// d r_n / d x_e for every epoch the factor touches, unwhitened, in the order
/// of factor.epochs().
std::vector<Matrix> residual_jacobian(const Factor& factor,
                                      const StateTrajectory& x);

struct LinearizedSystem {
  Eigen::SparseMatrix<double> jacobian;  // whitened, rows in factor order
  Vector residual;                       // stacked whitened residuals
  std::vector<int> row_offset;           // first row of each factor block
};

/// Whitened Jacobian and residual stack at x. `weights`, when given, holds one
/// IRLS scalar per factor applied as sqrt(w) on the factor's whitened block.
LinearizedSystem linearize(const FactorGraph& graph, const StateTrajectory& x,
                           const std::vector<double>* weights = nullptr);

}  // namespace robce
