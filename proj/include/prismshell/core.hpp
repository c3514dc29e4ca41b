#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace prismshell {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the current configuration of an element becomes
/// non-invertible during evaluation; continuation drivers treat it
/// as a signal to cut the step.
class ElementInversion : public Error {
public:
  explicit ElementInversion(const std::string& what) : Error(what) {}
};

} // namespace prismshell
