#pragma once

#include <vector>

#include "robce/types.hpp"

namespace robce {

/// Weights, means and covariances of a Gaussian mixture over some data
/// domain. Weights are positive and sum to one; covariances are SPD.
struct GaussianMixture {
  Vector weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;

  int components() const { return static_cast<int>(weights.size()); }
  int dim() const { return means.empty() ? 0 : static_cast<int>(means[0].size()); }

  void validate() const;

  /// log of w_m * N(x; mu_m, Lambda_m) per component, normalization included.
  Vector weighted_log_densities(const Vector& x) const;
};

/// Softmax of the weighted log densities; sums to one.
Vector predict_responsibility(const Vector& x, const GaussianMixture& mix);

}  // namespace robce
