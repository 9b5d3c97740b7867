#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace docksim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// NED convention throughout: x north, y east, z down (altitude gain is -z).
inline constexpr double kGravity = 9.81;
inline constexpr double kPi = std::numbers::pi;

// Raised when a caller violates an operation's precondition.
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when a simulation run becomes numerically invalid (NaN state etc.).
struct SimulationFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  return a - kPi;
}

inline bool all_finite(const Vec3& v) { return v.allFinite(); }

} // namespace docksim
