#pragma once

#include <deque>
#include <optional>

#include "docksim/common.hpp"
#include "docksim/vehicle.hpp"

namespace docksim {

// Cable-suspended docking bar, modeled as a damped spherical pendulum of
// length d_p hanging from an anchor fixed in the leader body. The two-cable
// suspension's yaw constraint is ignored (single-point gripper).
struct PlatformState {
  Vec3 anchor_offset = Vec3::Zero(); // anchor relative to leader center, m
  double d_p = 0.36;                 // cable length, m
  Vec3 u = Vec3::UnitZ();            // unit vector anchor -> bar
  Vec3 omega = Vec3::Zero();         // swing angular velocity, rad/s
  double damping_ratio = 0.05;

  Vec3 anchor(const VehicleState& leader) const { return leader.p + anchor_offset; }
  Vec3 bar_position(const VehicleState& leader) const {
    return anchor(leader) + d_p * u;
  }
  Vec3 bar_velocity(const VehicleState& leader) const {
    return leader.v + d_p * omega.cross(u);
  }
};

// One pendulum step driven by the anchor acceleration; the unit-length
// constraint is re-normalized every step.
PlatformState platform_step(const VehicleState& leader, const Vec3& leader_accel,
                            const PlatformState& plat, double dt);

enum class GateState { Open, Closing, Closed };

enum class DockEventType { Docked, Missed };

struct DockEvent {
  DockEventType type;
  double t = 0.0;        // exact event time (close completion)
  Vec3 rel_pos = Vec3::Zero();
  Vec3 rel_vel = Vec3::Zero();
};

struct GripperParams {
  double eps_g = 0.1;        // gate aperture, m
  double eps_contact = 0.02; // tip-touch radius, m
  double latency = 0.015;    // contact recognition latency, s
  double tau_servo = 0.06;   // gate close time, s
  Vec3 tip_offset = Vec3::Zero(); // gripper tip relative to follower center
};

// Rotary-gate gripper with sensed-contact latency. Contact detections are
// queued and acted on after `latency`; the gate then closes over tau_servo
// and latches whatever is inside the aperture. A software close command
// skips the sensing latency. Single-shot: the gate never reopens.
struct GripperState {
  GripperParams params;
  GateState gate = GateState::Open;
  std::deque<double> contact_queue;       // pending sensed-contact timestamps
  std::optional<double> close_start;      // exact time the gate began closing
  std::optional<double> commanded_close;  // software close request time
  bool event_emitted = false;

  void command_close(double t) {
    if (!commanded_close) commanded_close = t;
  }
};

// Advances the gripper over [t, t+dt). bar_rel_* are bar minus gripper tip.
// Returns a dock/miss event exactly once, timestamped analytically at
// close_start + tau_servo.
std::optional<DockEvent> gripper_step(GripperState& grip, const Vec3& bar_rel_pos,
                                      const Vec3& bar_rel_vel, double t, double dt);

enum class DockState { Approach, ContactPending, Docked, Missed };

// Thrust-transfer coupling applied after a successful dock: the follower's
// thrust ramps to zero over tau_ramp while the leader picks up the
// unsupported weight.
struct CouplingParams {
  double tau_ramp = 1.0;      // s
  double notify_delay = 0.05; // leader learns of the dock this late, s
};

// Fraction of the follower's hover thrust it still produces.
double follower_thrust_fraction(double t, double t_dock, const CouplingParams& cp);

// Extra specific force (down, m/s^2) the leader must carry at time t.
double leader_extra_load_accel(double t, double t_dock, double follower_mass,
                               double leader_mass, const CouplingParams& cp);

// Effective mass the leader's controller should feedforward, given that it
// learns of the dock notify_delay late but knows the ramp protocol.
double leader_feedforward_mass(double t, double t_dock, double leader_mass,
                               double follower_mass, const CouplingParams& cp);

} // namespace docksim
