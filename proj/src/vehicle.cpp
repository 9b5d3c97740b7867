#include "docksim/vehicle.hpp"

#include <Eigen/Geometry>

namespace docksim {

LinearModel linear_model(double mass) {
  if (!(mass > 0.0)) throw InvalidParameter("linear_model: mass must be positive");
  LinearModel mdl;
  mdl.A.setZero();
  mdl.A.block<3, 3>(0, 3).setIdentity();
  mdl.B.setZero();
  mdl.B.block<3, 3>(3, 0).setIdentity();
  mdl.B(6, 3) = 1.0;
  mdl.Bbar.setZero();
  mdl.Bbar.block<3, 3>(3, 0).setIdentity();
  mdl.C.setIdentity();
  return mdl;
}

InnerLoopCommand invert_dynamics(const Vec3& a_cmd, double psi_cmd, double mass) {
  if (!(mass > 0.0)) throw InvalidParameter("invert_dynamics: mass must be positive");
  if (!all_finite(a_cmd) || !std::isfinite(psi_cmd))
    throw SimulationFault("invert_dynamics: non-finite input");

  InnerLoopCommand cmd;
  Vec3 tv = kGravity * Vec3::UnitZ() - a_cmd; // thrust vector, specific force
  double n = tv.norm();
  if (n < kEpsThrust) {
    // Free-fall or inverted command: clip to the minimum usable thrust.
    tv = (n > 1e-12) ? Vec3(tv * (kEpsThrust / n)) : Vec3(0, 0, kEpsThrust);
    n = kEpsThrust;
    cmd.thrust_saturated = true;
  }
  cmd.T = mass * n;

  const Vec3 b3 = tv / n;                          // desired body z (down) axis
  const Vec3 c1(std::cos(psi_cmd), std::sin(psi_cmd), 0.0);
  Vec3 b2 = b3.cross(c1);
  if (b2.norm() < 1e-9) {
    // Thrust axis parallel to the yaw heading (horizontal thrust); fall back
    // to the heading's orthogonal.
    b2 = b3.cross(Vec3(-std::sin(psi_cmd), std::cos(psi_cmd), 0.0));
  }
  b2.normalize();
  const Vec3 b1 = b2.cross(b3);
  cmd.R_des.col(0) = b1;
  cmd.R_des.col(1) = b2;
  cmd.R_des.col(2) = b3;
  return cmd;
}

Vec3 translational_accel(const VehicleState& state, const InnerLoopCommand& cmd,
                         const Vec3& f_ext) {
  return -(state.R.col(2)) * (cmd.T / state.m) + kGravity * Vec3::UnitZ() + f_ext;
}

VehicleState step(const VehicleState& state, const InnerLoopCommand& cmd,
                  const Vec3& f_ext, double dt, double att_tau) {
  if (!(dt > 0.0) || dt > 0.01)
    throw InvalidParameter("step: dt must lie in (0, 0.01] s");
  if (!all_finite(state.p) || !all_finite(state.v) || !all_finite(f_ext) ||
      !state.R.allFinite() || !std::isfinite(cmd.T))
    throw SimulationFault("step: non-finite input");

  VehicleState out = state;

  // Inner attitude loop: geodesic relaxation toward R_des. The per-step
  // fraction reproduces exp(-dt/tau) error decay at step boundaries.
  if (att_tau <= 0.0) {
    out.R = cmd.R_des;
  } else {
    const double alpha = 1.0 - std::exp(-dt / att_tau);
    Eigen::Quaterniond q(state.R);
    Eigen::Quaterniond qd(cmd.R_des);
    out.R = q.slerp(alpha, qd).normalized().toRotationMatrix();
  }
  out.psi = std::atan2(out.R(1, 0), out.R(0, 0));

  // Semi-implicit Euler: velocity first, then position with the new velocity.
  const Vec3 a = translational_accel(out, cmd, f_ext);
  out.v = state.v + a * dt;
  out.p = state.p + out.v * dt;
  return out;
}

} // namespace docksim
