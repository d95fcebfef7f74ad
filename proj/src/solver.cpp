#include "robce/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>

namespace robce {

void SolverConfig::validate() const {
  if (max_iterations < 1) {
    throw Error("max_iterations must be at least 1");
  }
  if (initial_damping <= 0 || damping_increase <= 1 || damping_decrease <= 0 ||
      damping_decrease >= 1 || cost_tolerance <= 0 || step_tolerance <= 0) {
    throw Error("solver configuration values must be positive and consistent");
  }
}

std::string to_string(ConvergenceReason reason) {
  switch (reason) {
    case ConvergenceReason::kCostTolerance:
      return "cost_tol";
    case ConvergenceReason::kStepTolerance:
      return "step_tol";
    case ConvergenceReason::kMaxIterations:
      return "max_iter";
  }
  return "unknown";
}

double weighted_cost(const FactorGraph& graph, const StateTrajectory& x,
                     const std::vector<double>* weights) {
  if (weights != nullptr) {
    if (static_cast<int>(weights->size()) != graph.factor_count()) {
      throw WeightCountMismatch("need exactly one weight per factor");
    }
    for (double w : *weights) {
      if (!(w >= 0.0 && w <= 1.0)) {
        throw Error("IRLS weights must lie in [0,1]");
      }
    }
  }
  double cost = 0.0;
  for (int i = 0; i < graph.factor_count(); ++i) {
    const double w = weights != nullptr ? (*weights)[i] : 1.0;
    if (w == 0.0) {
      continue;
    }
    cost += w * whitened_residual(graph.factor(i), x).squaredNorm();
  }
  return cost;
}

namespace {

constexpr double kDampingCeiling = 1e12;
constexpr double kFactorizationCeiling = 1e32;

// Solves (H + lambda diag(H)) step = -g, escalating lambda until the
// factorization succeeds. Returns the lambda actually used.
template <typename Solve>
double damped_solve(const Vector& diag, double lambda, double increase,
                    Solve&& attempt) {
  while (true) {
    if (attempt(diag.cwiseMax(1e-12) * lambda)) {
      return lambda;
    }
    lambda *= increase;
    if (lambda > kFactorizationCeiling) {
      throw LinearAlgebraFailure(
          "normal equations singular at the damping ceiling");
    }
  }
}

}  // namespace

std::pair<StateTrajectory, SolveReport> solve(const FactorGraph& graph,
                                              const StateTrajectory& x0,
                                              const SolverConfig& config,
                                              const std::vector<double>* weights) {
  config.validate();
  if (!x0.all_finite()) {
    throw NonFiniteData("initial trajectory must be finite");
  }

  const bool dense = graph.epochs() < config.dense_epoch_threshold;

  StateTrajectory x = x0;
  double cost = weighted_cost(graph, x, weights);

  SolveReport report;
  report.cost_trace.push_back(cost);
  double lambda = config.initial_damping;

  for (int it = 1; it <= config.max_iterations; ++it) {
    report.iterations = it;
    const LinearizedSystem lin = linearize(graph, x, weights);

    const Eigen::SparseMatrix<double> h_sparse =
        Eigen::SparseMatrix<double>(lin.jacobian.transpose()) * lin.jacobian;
    const Vector g = lin.jacobian.transpose() * lin.residual;
    const Vector h_diag = h_sparse.diagonal();

    bool accepted = false;
    while (!accepted) {
      Vector step;
      if (dense) {
        Matrix h = Matrix(h_sparse);
        lambda = damped_solve(h_diag, lambda, config.damping_increase,
                              [&](const Vector& add) {
                                Matrix damped = h;
                                damped.diagonal() += add;
                                Eigen::LDLT<Matrix> ldlt(damped);
                                if (ldlt.info() != Eigen::Success ||
                                    !ldlt.isPositive()) {
                                  return false;
                                }
                                step = ldlt.solve(-g);
                                return step.allFinite();
                              });
      } else {
        lambda = damped_solve(
            h_diag, lambda, config.damping_increase, [&](const Vector& add) {
              Eigen::SparseMatrix<double> damped = h_sparse;
              for (int i = 0; i < add.size(); ++i) {
                damped.coeffRef(i, i) += add(i);
              }
              Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(damped);
              if (ldlt.info() != Eigen::Success) {
                return false;
              }
              step = ldlt.solve(-g);
              return step.allFinite();
            });
      }

      const Vector flat = x.flattened();
      if (step.norm() <=
          config.step_tolerance * (flat.norm() + config.step_tolerance)) {
        report.reason = ConvergenceReason::kStepTolerance;
        report.final_cost = cost;
        return {x, report};
      }

      StateTrajectory trial = x;
      trial.set_flattened(flat + step);
      const double trial_cost = weighted_cost(graph, trial, weights);

      if (trial_cost < cost) {
        const double decrease = (cost - trial_cost) / std::max(cost, 1e-300);
        x = trial;
        cost = trial_cost;
        report.cost_trace.push_back(cost);
        lambda = std::max(lambda * config.damping_decrease, 1e-12);
        accepted = true;
        if (decrease < config.cost_tolerance) {
          report.reason = ConvergenceReason::kCostTolerance;
          report.final_cost = cost;
          return {x, report};
        }
      } else {
        lambda *= config.damping_increase;
        if (lambda > kDampingCeiling) {
          // No descent direction left at this point; treat as converged.
          report.reason = ConvergenceReason::kStepTolerance;
          report.final_cost = cost;
          return {x, report};
        }
      }
    }
  }

  report.reason = ConvergenceReason::kMaxIterations;
  report.final_cost = cost;
  return {x, report};
}

}  // namespace robce
