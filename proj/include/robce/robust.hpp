#pragma once

#include <utility>

#include "robce/mixture.hpp"
#include "robce/solver.hpp"

namespace robce {

struct DcsConfig {
  double phi = 1.0;
  int max_outer_iterations = 20;
  double weight_tolerance = 1e-6;

  void validate() const;
};

/// Redescending DCS scaling min(1, 2*phi / (phi + e2)) for the squared
/// whitened residual norm e2. Equals 1 on [0, phi] and decays to 0.
double dcs_weight(double e2, double phi);

/// IRLS weights at the given trajectory: dcs_weight of each measurement
/// factor's squared whitened norm; structural factors keep weight 1.
std::vector<double> dcs_weights(const FactorGraph& graph,
                                const StateTrajectory& x, double phi);

/// Alternates DCS weight computation from the previous iterate's residuals
/// with weighted solves until the weights change by less than the tolerance
/// in max-norm, or the outer-iteration cap is reached.
std::pair<StateTrajectory, SolveReport> solve_dcs(const FactorGraph& graph,
                                                  const StateTrajectory& x0,
                                                  const DcsConfig& dcs,
                                                  const SolverConfig& solver);

/// argmax over components of w_i * N(r; mu_i, Lambda_i), ties broken by the
/// lowest index. Returns the winning index and its noise model.
std::pair<int, NoiseModel> max_mixture_select(const Vector& r,
                                              const GaussianMixture& mix);

/// Max-Mixtures with a static mixture: each outer iteration reassigns every
/// measurement factor's noise model from its current raw residual, then
/// re-solves; stops once the assignments repeat or after the iteration cap.
/// Mutates the graph's measurement noise models.
std::pair<StateTrajectory, SolveReport> solve_max_mixture(
    FactorGraph& graph, const StateTrajectory& x0, const GaussianMixture& mix,
    const SolverConfig& solver, int max_outer_iterations = 20);

}  // namespace robce
