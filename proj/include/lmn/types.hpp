#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lmn {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Error hierarchy. Every failure raised by the library derives from Error so
// that drivers can abort a single refinement level and keep going.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TopologyError : Error {
  using Error::Error;
};

struct GeometryError : Error {
  using Error::Error;
};

/// Non-physical state: nonpositive density or temperature.
struct StateError : Error {
  using Error::Error;
};

/// Non-finite values produced by an update.
struct DivergenceError : Error {
  using Error::Error;
};

/// Iterative method failed to converge.
struct NumericError : Error {
  using Error::Error;
};

/// Manufactured source does not satisfy its governing equation.
struct SourceInconsistencyError : Error {
  using Error::Error;
};

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace lmn
