#pragma once

#include <stdexcept>
#include <string>

namespace robce {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyProblem : Error {
  using Error::Error;
};
struct DisconnectedGraph : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct NonPositiveDefinite : Error {
  using Error::Error;
};
struct LinearAlgebraFailure : Error {
  using Error::Error;
};
struct WeightCountMismatch : Error {
  using Error::Error;
};
struct NegativeInput : Error {
  using Error::Error;
};
struct TooFewPoints : Error {
  using Error::Error;
};
struct NonFiniteData : Error {
  using Error::Error;
};
struct EigenFailure : Error {
  using Error::Error;
};
struct DegenerateDesign : Error {
  using Error::Error;
};
struct PairingError : Error {
  using Error::Error;
};
struct FeatureNameMismatch : Error {
  using Error::Error;
};
struct EmptyPartition : Error {
  using Error::Error;
};
struct CoverageGap : Error {
  using Error::Error;
};
struct ModeConfigMismatch : Error {
  using Error::Error;
};
struct ObservabilityError : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct EmptySeries : Error {
  using Error::Error;
};

}  // namespace robce
