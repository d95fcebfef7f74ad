#include "robce/robust.hpp"

#include <algorithm>
#include <cmath>

namespace robce {

void DcsConfig::validate() const {
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    throw Error("DCS phi must be finite and positive");
  }
  if (max_outer_iterations < 1 || weight_tolerance <= 0) {
    throw Error("DCS outer-loop settings must be positive");
  }
}

double dcs_weight(double e2, double phi) {
  if (e2 < 0.0) {
    throw NegativeInput("squared residual norm cannot be negative");
  }
  if (!(phi > 0.0)) {
    throw Error("DCS phi must be positive");
  }
  return std::min(1.0, 2.0 * phi / (phi + e2));
}

std::vector<double> dcs_weights(const FactorGraph& graph,
                                const StateTrajectory& x, double phi) {
  std::vector<double> w(graph.factor_count(), 1.0);
  for (int i : graph.measurement_factor_indices()) {
    const double e2 = whitened_residual(graph.factor(i), x).squaredNorm();
    w[i] = dcs_weight(e2, phi);
  }
  return w;
}

std::pair<StateTrajectory, SolveReport> solve_dcs(const FactorGraph& graph,
                                                  const StateTrajectory& x0,
                                                  const DcsConfig& dcs,
                                                  const SolverConfig& solver) {
  dcs.validate();
  std::vector<double> weights(graph.factor_count(), 1.0);
  auto [x, report] = solve(graph, x0, solver, &weights);
  report.outer_iterations = 1;

  for (int outer = 1; outer <= dcs.max_outer_iterations; ++outer) {
    const std::vector<double> next = dcs_weights(graph, x, dcs.phi);
    double delta = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      delta = std::max(delta, std::abs(next[i] - weights[i]));
    }
    if (delta < dcs.weight_tolerance) {
      break;
    }
    weights = next;
    std::tie(x, report) = solve(graph, x, solver, &weights);
    report.outer_iterations = outer + 1;
  }
  return {x, report};
}

std::pair<int, NoiseModel> max_mixture_select(const Vector& r,
                                              const GaussianMixture& mix) {
  const Vector scores = mix.weighted_log_densities(r);
  int best = 0;
  for (int i = 1; i < scores.size(); ++i) {
    if (scores(i) > scores(best)) {
      best = i;
    }
  }
  return {best, NoiseModel(mix.means[best], mix.covariances[best])};
}

std::pair<StateTrajectory, SolveReport> solve_max_mixture(
    FactorGraph& graph, const StateTrajectory& x0, const GaussianMixture& mix,
    const SolverConfig& solver, int max_outer_iterations) {
  mix.validate();
  const std::vector<int> measurement = graph.measurement_factor_indices();
  for (int i : measurement) {
    if (graph.factor(i).residual_dim() != mix.dim()) {
      throw DimensionMismatch("mixture dimension does not match residuals");
    }
  }

  StateTrajectory x = x0;
  SolveReport report;
  std::vector<int> assignment(measurement.size(), -1);

  for (int outer = 1; outer <= max_outer_iterations; ++outer) {
    std::vector<int> next(measurement.size());
    for (size_t k = 0; k < measurement.size(); ++k) {
      Factor& f = graph.factor(measurement[k]);
      auto [index, model] = max_mixture_select(residual(f, x), mix);
      next[k] = index;
      f.set_noise(std::move(model));
    }
    if (next == assignment) {
      break;
    }
    assignment = next;
    std::tie(x, report) = solve(graph, x, solver);
    report.outer_iterations = outer;
  }
  return {x, report};
}

}  // namespace robce
