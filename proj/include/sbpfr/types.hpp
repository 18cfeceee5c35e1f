#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sbpfr {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
/// Points stored column-wise, one column per point.
template <typename Scalar>
using Points = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

using Mat = Matrix<double>;
using Vec = Vector<double>;
using Pts = Points<double>;
using Vec2 = Eigen::Vector2d;

/// Failure while building a rule, basis or operator.
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mesh connectivity or orientation failure.
struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// State outside the admissible set of the conservation law.
struct AdmissibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sbpfr
