#include "robce/factor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace robce {

Factor::Factor(FactorKind kind, std::vector<int> epochs, Vector value,
               std::optional<Vector> beacon, NoiseModel noise,
               int observation_index)
    : kind_(kind),
      epochs_(std::move(epochs)),
      value_(std::move(value)),
      beacon_(std::move(beacon)),
      noise_(std::move(noise)),
      observation_index_(observation_index) {
  if (epochs_.empty()) {
    throw Error("factor must reference at least one epoch");
  }
  if (residual_dim() != noise_.dim()) {
    throw DimensionMismatch("residual dimension differs from noise model");
  }
  if ((kind_ == FactorKind::kRange || kind_ == FactorKind::kPhaseLike) &&
      !beacon_.has_value()) {
    throw Error("range/phase_like factor requires a beacon position");
  }
}

void Factor::set_noise(NoiseModel noise) {
  if (noise.dim() != residual_dim()) {
    throw DimensionMismatch("replacement noise model has wrong dimension");
  }
  noise_ = std::move(noise);
}

FactorGraph::FactorGraph(int epochs, int position_dim,
                         std::vector<Factor> factors,
                         std::vector<Observation> observations)
    : epochs_(epochs),
      position_dim_(position_dim),
      factors_(std::move(factors)),
      observations_(std::move(observations)) {}

std::vector<int> FactorGraph::measurement_factor_indices() const {
  std::vector<int> out;
  for (int i = 0; i < factor_count(); ++i) {
    if (factors_[i].is_measurement()) {
      out.push_back(i);
    }
  }
  return out;
}

namespace {

void check_epoch(int epoch_index, int epochs) {
  if (epoch_index < 0 || epoch_index >= epochs) {
    throw DisconnectedGraph("observation epoch " + std::to_string(epoch_index) +
                            " is outside the trajectory (0.." +
                            std::to_string(epochs - 1) + ")");
  }
}

}  // namespace

FactorGraph build_graph(const std::vector<Observation>& observations,
                        const Vector& prior_mean, const NoiseModel& prior_noise,
                        const NoiseModel& motion_noise,
                        std::optional<int> epochs) {
  if (observations.empty()) {
    throw EmptyProblem("cannot build a graph from zero observations");
  }
  const int state_dim = static_cast<int>(prior_mean.size());
  const int position_dim = state_dim - 1;
  if (position_dim != 2 && position_dim != 3) {
    throw DimensionMismatch("prior mean must hold a 2D/3D position plus bias");
  }
  if (prior_noise.dim() != state_dim || motion_noise.dim() != state_dim) {
    throw DimensionMismatch("prior/motion noise must be full-state");
  }

  int n_epochs = 0;
  if (epochs.has_value()) {
    n_epochs = *epochs;
  } else {
    for (const Observation& obs : observations) {
      n_epochs = std::max(n_epochs, obs.epoch_index + 1);
    }
  }
  if (n_epochs < 1) {
    throw EmptyProblem("problem spans zero epochs");
  }

  // All observations must share one metadata schema.
  const std::vector<std::string>& schema = observations.front().metadata.names;
  for (const Observation& obs : observations) {
    obs.metadata.validate();
    if (obs.metadata.names != schema) {
      throw FeatureNameMismatch("observations disagree on feature names");
    }
  }

  std::vector<Factor> factors;
  factors.emplace_back(FactorKind::kPrior, std::vector<int>{0}, prior_mean,
                       std::nullopt, prior_noise);
  for (int e = 0; e + 1 < n_epochs; ++e) {
    factors.emplace_back(FactorKind::kBetween, std::vector<int>{e, e + 1},
                         Vector::Zero(state_dim), std::nullopt, motion_noise);
  }

  for (int i = 0; i < static_cast<int>(observations.size()); ++i) {
    const Observation& obs = observations[i];
    check_epoch(obs.epoch_index, n_epochs);
    switch (obs.kind) {
      case ObservationKind::kRange:
      case ObservationKind::kPhaseLike: {
        if (!obs.beacon.has_value()) {
          throw Error("range/phase_like observation lacks a beacon");
        }
        if (obs.beacon->size() != position_dim) {
          throw DimensionMismatch("beacon dimension does not match positions");
        }
        if (obs.value.size() != 1) {
          throw DimensionMismatch("range/phase_like observations are scalar");
        }
        const FactorKind kind = obs.kind == ObservationKind::kRange
                                    ? FactorKind::kRange
                                    : FactorKind::kPhaseLike;
        const double sigma =
            kind == FactorKind::kRange ? 1.0 : 0.01;  // nominal, replaced later
        factors.emplace_back(kind, std::vector<int>{obs.epoch_index}, obs.value,
                             obs.beacon, NoiseModel::isotropic(1, sigma), i);
        break;
      }
      case ObservationKind::kPrior: {
        if (obs.value.size() != state_dim) {
          throw DimensionMismatch("prior observation must be full-state");
        }
        factors.emplace_back(FactorKind::kPrior,
                             std::vector<int>{obs.epoch_index}, obs.value,
                             std::nullopt, prior_noise, i);
        break;
      }
      case ObservationKind::kBetween: {
        check_epoch(obs.epoch_index + 1, n_epochs);
        if (obs.value.size() != state_dim) {
          throw DimensionMismatch("between observation must be full-state");
        }
        factors.emplace_back(
            FactorKind::kBetween,
            std::vector<int>{obs.epoch_index, obs.epoch_index + 1}, obs.value,
            std::nullopt, motion_noise, i);
        break;
      }
    }
  }

  return FactorGraph(n_epochs, position_dim, std::move(factors), observations);
}

Vector residual(const Factor& factor, const StateTrajectory& x) {
  for (int e : factor.epochs()) {
    if (e < 0 || e >= x.epochs()) {
      throw DimensionMismatch("factor references an epoch outside trajectory");
    }
  }
  switch (factor.kind()) {
    case FactorKind::kPrior:
      if (factor.residual_dim() != x.state_dim()) {
        throw DimensionMismatch("prior factor dimension mismatch");
      }
      return factor.value() - x.state(factor.epochs()[0]);
    case FactorKind::kBetween: {
      if (factor.residual_dim() != x.state_dim()) {
        throw DimensionMismatch("between factor dimension mismatch");
      }
      const Vector delta =
          x.state(factor.epochs()[1]) - x.state(factor.epochs()[0]);
      return factor.value() - delta;
    }
    case FactorKind::kRange:
    case FactorKind::kPhaseLike: {
      const int e = factor.epochs()[0];
      if (factor.beacon()->size() != x.position_dim()) {
        throw DimensionMismatch("beacon/position dimension mismatch");
      }
      const double predicted =
          (x.position(e) - *factor.beacon()).norm() + x.bias(e);
      Vector r(1);
      r(0) = factor.value()(0) - predicted;
      return r;
    }
  }
  throw Error("unreachable factor kind");
}

Vector whitened_residual(const Factor& factor, const StateTrajectory& x) {
  return factor.noise().whiten(residual(factor, x));
}

std::vector<Matrix> residual_jacobian(const Factor& factor,
                                      const StateTrajectory& x) {
  const int sd = x.state_dim();
  switch (factor.kind()) {
    case FactorKind::kPrior:
      return {-Matrix::Identity(sd, sd)};
    case FactorKind::kBetween:
      return {Matrix::Identity(sd, sd), -Matrix::Identity(sd, sd)};
    case FactorKind::kRange:
    case FactorKind::kPhaseLike: {
      const int e = factor.epochs()[0];
      const Vector diff = x.position(e) - *factor.beacon();
      const double dist = std::max(diff.norm(), 1e-12);
      Matrix j(1, sd);
      j.leftCols(x.position_dim()) = -(diff / dist).transpose();
      j(0, x.position_dim()) = -1.0;
      return {j};
    }
  }
  throw Error("unreachable factor kind");
}

LinearizedSystem linearize(const FactorGraph& graph, const StateTrajectory& x,
                           const std::vector<double>* weights) {
  if (!x.all_finite()) {
    throw NonFiniteData("cannot linearize at a non-finite trajectory");
  }
  if (x.epochs() != graph.epochs() ||
      x.position_dim() != graph.position_dim()) {
    throw DimensionMismatch("trajectory does not match the graph template");
  }
  if (weights != nullptr &&
      static_cast<int>(weights->size()) != graph.factor_count()) {
    throw WeightCountMismatch("need exactly one weight per factor");
  }

  const int sd = graph.state_dim();
  int n_rows = 0;
  std::vector<int> row_offset(graph.factor_count());
  for (int i = 0; i < graph.factor_count(); ++i) {
    row_offset[i] = n_rows;
    n_rows += graph.factor(i).residual_dim();
  }

  LinearizedSystem sys;
  sys.row_offset = std::move(row_offset);
  sys.residual = Vector::Zero(n_rows);
  sys.jacobian.resize(n_rows, graph.epochs() * sd);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(n_rows) * 2 * sd);

  for (int i = 0; i < graph.factor_count(); ++i) {
    const Factor& f = graph.factor(i);
    const double w = weights != nullptr ? (*weights)[i] : 1.0;
    const double sw = std::sqrt(w);
    const int r0 = sys.row_offset[i];

    sys.residual.segment(r0, f.residual_dim()) =
        sw * f.noise().whiten(residual(f, x));

    const std::vector<Matrix> blocks = residual_jacobian(f, x);
    for (size_t b = 0; b < blocks.size(); ++b) {
      const Matrix wb = sw * f.noise().whiten_jacobian(blocks[b]);
      const int c0 = f.epochs()[b] * sd;
      for (int r = 0; r < wb.rows(); ++r) {
        for (int c = 0; c < wb.cols(); ++c) {
          if (wb(r, c) != 0.0) {
            triplets.emplace_back(r0 + r, c0 + c, wb(r, c));
          }
        }
      }
    }
  }
  sys.jacobian.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

}  // namespace robce
