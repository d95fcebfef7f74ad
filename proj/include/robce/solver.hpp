#pragma once

#include <utility>
#include <vector>

#include "robce/factor_graph.hpp"

namespace robce {

struct SolverConfig {
  int max_iterations = 100;
  double initial_damping = 1e-4;
  double damping_increase = 10.0;
  double damping_decrease = 0.1;
  double cost_tolerance = 1e-8;  // relative decrease of the weighted cost
  double step_tolerance = 1e-10;
  int dense_epoch_threshold = 50;  // dense normal equations below this size

  void validate() const;
};

enum class ConvergenceReason { kCostTolerance, kStepTolerance, kMaxIterations };

std::string to_string(ConvergenceReason reason);

struct SolveReport {
  double final_cost = 0.0;
  int iterations = 0;
  ConvergenceReason reason = ConvergenceReason::kMaxIterations;
  std::vector<double> cost_trace;  // initial cost followed by accepted steps
  int outer_iterations = 1;        // robust wrappers record their loop count
};

/// Sum over factors of w_n * ||whitened residual_n||^2. Weights default to 1
/// (the plain weighted NLLS objective); when given they must be in [0,1] with
/// one entry per factor.
double weighted_cost(const FactorGraph& graph, const StateTrajectory& x,
                     const std::vector<double>* weights = nullptr);

/// Levenberg-Marquardt minimization with multiplicative damping on the
/// normal-equation diagonal. Accepted steps never increase the cost; the
/// result is deterministic for fixed inputs.
std::pair<StateTrajectory, SolveReport> solve(
    const FactorGraph& graph, const StateTrajectory& x0,
    const SolverConfig& config = {},
    const std::vector<double>* weights = nullptr);

}  // namespace robce
