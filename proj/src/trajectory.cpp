#include "docksim/trajectory.hpp"

namespace docksim {

QuinticTrajectory QuinticTrajectory::plan(const MotionState& start, const MotionState& goal,
                                          double t0, double t_h, HoldMode hold_mode,
                                          double psi_ref) {
  if (!(t_h > 0.0)) throw InvalidParameter("plan: horizon must be positive");

  QuinticTrajectory traj;
  traj.t0_ = t0;
  traj.t_h_ = t_h;
  traj.goal_ = goal;
  traj.hold_mode_ = hold_mode;
  traj.psi_ref_ = psi_ref;

  const double T = t_h;
  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
  Eigen::Matrix3d M;
  M << T3, T4, T5,
       3 * T2, 4 * T3, 5 * T4,
       6 * T, 12 * T2, 20 * T3;
  const Eigen::Matrix3d Minv = M.inverse();

  for (int ax = 0; ax < 3; ++ax) {
    const double p0 = start.p[ax], v0 = start.v[ax], a0 = start.a[ax];
    Eigen::Vector3d rhs;
    rhs << goal.p[ax] - (p0 + v0 * T + 0.5 * a0 * T2),
           goal.v[ax] - (v0 + a0 * T),
           goal.a[ax] - a0;
    const Eigen::Vector3d c345 = Minv * rhs;
    traj.coeffs_(ax, 0) = p0;
    traj.coeffs_(ax, 1) = v0;
    traj.coeffs_(ax, 2) = 0.5 * a0;
    traj.coeffs_(ax, 3) = c345[0];
    traj.coeffs_(ax, 4) = c345[1];
    traj.coeffs_(ax, 5) = c345[2];
  }
  return traj;
}

Reference QuinticTrajectory::sample(double t) const {
  Reference ref;
  ref.psi = psi_ref_;
  double tau = t - t0_;
  if (tau < 0.0) tau = 0.0; // clamp pre-start queries to the start

  if (tau > t_h_) {
    if (hold_mode_ == HoldMode::HoldPoint) {
      ref.p = goal_.p;
      return ref;
    }
    // TrackLeader: goal translated along the (leader) goal velocity.
    ref.p = goal_.p + goal_.v * (tau - t_h_);
    ref.v = goal_.v;
    return ref;
  }

  for (int ax = 0; ax < 3; ++ax) {
    double p = 0, v = 0, a = 0;
    // Horner evaluation of the quintic and its first two derivatives.
    for (int k = 5; k >= 0; --k) {
      const double c = coeffs_(ax, k);
      p = p * tau + c;
      if (k >= 1) v = v * tau + k * c;
      if (k >= 2) a = a * tau + k * (k - 1) * c;
    }
    ref.p[ax] = p;
    ref.v[ax] = v;
    ref.a[ax] = a;
  }
  return ref;
}

MotionState predict_platform(const VehicleState& leader, const Vec3& anchor_offset,
                             double t_now, double t_meet, double d_p,
                             const Vec3& gripper_offset) {
  if (!(t_meet > t_now)) throw InvalidParameter("predict_platform: t_meet must be in the future");
  MotionState goal;
  goal.p = leader.p + leader.v * (t_meet - t_now) + anchor_offset +
           Vec3(0, 0, d_p) - gripper_offset;
  goal.v = leader.v;
  goal.a = Vec3::Zero();
  return goal;
}

} // namespace docksim
