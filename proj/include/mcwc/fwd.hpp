#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace mcwc {

template <typename Scalar> using Vec3Tpl = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Mat3Tpl = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Vec6Tpl = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar> using Mat6Tpl = Eigen::Matrix<Scalar, 6, 6>;
template <typename Scalar>
using VectorXTpl = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixXTpl = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Matrix3XTpl = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;
template <typename Scalar>
using Matrix6XTpl = Eigen::Matrix<Scalar, 6, Eigen::Dynamic>;
template <typename Scalar>
using MatrixX6Tpl = Eigen::Matrix<Scalar, Eigen::Dynamic, 6>;

using Vec3 = Vec3Tpl<double>;
using Mat3 = Mat3Tpl<double>;
using Vec6 = Vec6Tpl<double>;
using Mat6 = Mat6Tpl<double>;
using VectorX = VectorXTpl<double>;
using MatrixX = MatrixXTpl<double>;
using Matrix3X = Matrix3XTpl<double>;
using Matrix6X = Matrix6XTpl<double>;
using MatrixX6 = MatrixX6Tpl<double>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A domain object failed its construction invariants.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class ZeroVector : public Error {
public:
  using Error::Error;
};

class MalformedProgram : public Error {
public:
  using Error::Error;
};

/// The simplex ran out of usable pivots; the result would not be trustworthy.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// Wraps a solver failure raised while answering a higher-level query.
class LpFailure : public Error {
public:
  using Error::Error;
};

/// A wrench was expressed about a point other than the one a constraint
/// set is anchored at.
class AnchorMismatch : public Error {
public:
  using Error::Error;
};

/// Some generator is not strictly inside the witness half-space.
class WitnessOnBoundary : public Error {
public:
  using Error::Error;
};

class HullFailure : public Error {
public:
  using Error::Error;
};

class DegenerateInput : public HullFailure {
public:
  using HullFailure::HullFailure;
};

namespace detail {
template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &m) {
  return m.allFinite();
}
} // namespace detail

} // namespace mcwc
