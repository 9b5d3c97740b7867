#pragma once

#include "docksim/common.hpp"

namespace docksim {

// Translational state of one multirotor plus its attitude. The 7-dim
// feedback state is x = [p, v, psi]; attitude R (body->inertial) is carried
// for the inner loop and thrust geometry.
struct VehicleState {
  Vec3 p = Vec3::Zero();   // position, m (NED, down positive)
  Vec3 v = Vec3::Zero();   // velocity, m/s
  double psi = 0.0;        // yaw, rad
  Mat3 R = Mat3::Identity(); // body -> inertial
  double m = 0.7;          // mass, kg

  Vec7 state_vector() const {
    Vec7 x;
    x << p, v, psi;
    return x;
  }
};

// Inner-loop command: desired attitude and collective thrust.
struct InnerLoopCommand {
  Mat3 R_des = Mat3::Identity();
  double T = 0.0;               // N, >= 0
  bool thrust_saturated = false; // set when a near-free-fall command was clipped
};

// Linearized model of the feedforward-inverted dynamics:
//   xdot = A x + B u + Bbar f_ext,  y = C x
// A has the position->velocity identity block, B routes [a, psidot] into
// [vdot, psidot], and Bbar injects disturbance as acceleration.
struct LinearModel {
  Eigen::Matrix<double, 7, 7> A;
  Eigen::Matrix<double, 7, 4> B;
  Eigen::Matrix<double, 6, 3> Bbar;
  Eigen::Matrix<double, 7, 7> C;
};

LinearModel linear_model(double mass);

// Maps an acceleration + yaw command onto (R_des, T) by inverting the
// rigid-body thrust equation. Near-free-fall commands are clipped to a
// minimum thrust-vector magnitude instead of being rejected.
InnerLoopCommand invert_dynamics(const Vec3& a_cmd, double psi_cmd, double mass);

// Minimum thrust-vector magnitude accepted by the inversion, m/s^2.
inline constexpr double kEpsThrust = 0.1 * kGravity;

// Advances the vehicle by one physics step: first-order attitude relaxation
// toward cmd.R_des with time constant att_tau (att_tau == 0 snaps attitude),
// then semi-implicit Euler on the translational states. f_ext is a specific
// force (acceleration) in the inertial frame.
VehicleState step(const VehicleState& state, const InnerLoopCommand& cmd,
                  const Vec3& f_ext, double dt, double att_tau = 0.05);

// Acceleration the vehicle undergoes at its current attitude under (cmd, f_ext).
Vec3 translational_accel(const VehicleState& state, const InnerLoopCommand& cmd,
                         const Vec3& f_ext);

} // namespace docksim
