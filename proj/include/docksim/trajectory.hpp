#pragma once

#include "docksim/common.hpp"
#include "docksim/vehicle.hpp"

namespace docksim {

// Position/velocity/acceleration boundary condition for one trajectory end.
struct MotionState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
};

struct Reference {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  double psi = 0.0;
};

enum class HoldMode { HoldPoint, TrackLeader };

// Minimum-jerk quintic between two full motion states, one polynomial per
// axis. Past the horizon the reference either parks at the goal or
// extrapolates it along the goal velocity (leader-relative station keeping).
class QuinticTrajectory {
 public:
  QuinticTrajectory() = default;

  static QuinticTrajectory plan(const MotionState& start, const MotionState& goal,
                                double t0, double t_h, HoldMode hold_mode,
                                double psi_ref = 0.0);

  Reference sample(double t) const;

  double t0() const { return t0_; }
  double horizon() const { return t_h_; }
  HoldMode hold_mode() const { return hold_mode_; }
  const MotionState& goal() const { return goal_; }

 private:
  Eigen::Matrix<double, 3, 6> coeffs_ = Eigen::Matrix<double, 3, 6>::Zero();
  MotionState goal_;
  double t0_ = 0.0;
  double t_h_ = 1.0;
  double psi_ref_ = 0.0;
  HoldMode hold_mode_ = HoldMode::HoldPoint;
};

// Docking goal: leader propagated at constant velocity to the meet time,
// displaced by the platform hang point d_p below it, minus the gripper's
// mounting offset on the follower.
struct PlatformState; // platform.hpp
MotionState predict_platform(const VehicleState& leader, const Vec3& anchor_offset,
                             double t_now, double t_meet, double d_p,
                             const Vec3& gripper_offset = Vec3::Zero());

} // namespace docksim
