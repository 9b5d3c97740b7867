#include "docksim/docking.hpp"

namespace docksim {

PlatformState platform_step(const VehicleState& leader, const Vec3& leader_accel,
                            const PlatformState& plat, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("platform_step: dt must be positive");
  PlatformState out = plat;

  // Effective gravity in the anchor frame; the pendulum only feels the
  // difference between gravity and the anchor's acceleration.
  const Vec3 g_eff = kGravity * Vec3::UnitZ() - leader_accel;
  const double omega_n = std::sqrt(kGravity / plat.d_p);
  const double c = 2.0 * plat.damping_ratio * omega_n;

  const Vec3 omega_dot = plat.u.cross(g_eff) / plat.d_p - c * plat.omega;
  out.omega = plat.omega + dt * omega_dot;
  // Keep the angular velocity tangential (no spin about the cable).
  out.omega -= out.omega.dot(plat.u) * plat.u;
  out.u = (plat.u + dt * out.omega.cross(plat.u)).normalized();
  return out;
}

std::optional<DockEvent> gripper_step(GripperState& grip, const Vec3& bar_rel_pos,
                                      const Vec3& bar_rel_vel, double t, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("gripper_step: dt must be positive");
  const double t_end = t + dt;
  const auto& p = grip.params;

  if (grip.gate == GateState::Open) {
    if (grip.contact_queue.empty() && bar_rel_pos.norm() < p.eps_contact)
      grip.contact_queue.push_back(t);

    // Software trigger acts immediately; sensed contact after the latency.
    double start = std::numeric_limits<double>::infinity();
    if (grip.commanded_close) start = *grip.commanded_close;
    if (!grip.contact_queue.empty())
      start = std::min(start, grip.contact_queue.front() + p.latency);
    if (start <= t_end) {
      grip.gate = GateState::Closing;
      grip.close_start = start;
    }
  }

  if (grip.gate == GateState::Closing && !grip.event_emitted &&
      t_end - *grip.close_start >= p.tau_servo) {
    grip.gate = GateState::Closed;
    grip.event_emitted = true;
    DockEvent ev;
    ev.t = *grip.close_start + p.tau_servo;
    ev.rel_pos = bar_rel_pos;
    ev.rel_vel = bar_rel_vel;
    ev.type = (bar_rel_pos.norm() < p.eps_g) ? DockEventType::Docked
                                             : DockEventType::Missed;
    return ev;
  }
  return std::nullopt;
}

double follower_thrust_fraction(double t, double t_dock, const CouplingParams& cp) {
  const double x = (t - t_dock) / cp.tau_ramp;
  return std::clamp(1.0 - x, 0.0, 1.0);
}

double leader_extra_load_accel(double t, double t_dock, double follower_mass,
                               double leader_mass, const CouplingParams& cp) {
  const double unsupported = 1.0 - follower_thrust_fraction(t, t_dock, cp);
  return follower_mass * kGravity * unsupported / leader_mass;
}

double leader_feedforward_mass(double t, double t_dock, double leader_mass,
                               double follower_mass, const CouplingParams& cp) {
  // The leader follows the nominal ramp schedule, shifted by how late it
  // heard about the dock. The shift is what produces the transient dip.
  const double x = (t - (t_dock + cp.notify_delay)) / cp.tau_ramp;
  return leader_mass + follower_mass * std::clamp(x, 0.0, 1.0);
}

} // namespace docksim
