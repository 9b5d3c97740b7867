#include "docksim/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace docksim {

using nlohmann::json;

namespace {

Vec3 vec3_from(const json& j, const Vec3& dflt) {
  if (!j.is_array() || j.size() != 3) return dflt;
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json vec3_to(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

LeaderMode leader_mode_from(const std::string& s) {
  if (s == "RigidMount") return LeaderMode::RigidMount;
  if (s == "Hover") return LeaderMode::Hover;
  if (s == "ConstantVelocity") return LeaderMode::ConstantVelocity;
  throw InvalidParameter("unknown leader mode: " + s);
}

std::string leader_mode_to(LeaderMode m) {
  switch (m) {
    case LeaderMode::RigidMount: return "RigidMount";
    case LeaderMode::Hover: return "Hover";
    default: return "ConstantVelocity";
  }
}

Compensation compensation_from(const std::string& s) {
  if (s == "None") return Compensation::None;
  if (s == "Model") return Compensation::Model;
  if (s == "Observer") return Compensation::Observer;
  if (s == "Perfect") return Compensation::Perfect;
  throw InvalidParameter("unknown compensation mode: " + s);
}

std::string compensation_to(Compensation c) {
  switch (c) {
    case Compensation::None: return "None";
    case Compensation::Model: return "Model";
    case Compensation::Observer: return "Observer";
    default: return "Perfect";
  }
}

MissionType mission_type_from(const std::string& s) {
  if (s == "Dock") return MissionType::Dock;
  if (s == "Sweep") return MissionType::Sweep;
  if (s == "Hold") return MissionType::Hold;
  throw InvalidParameter("unknown mission type: " + s);
}

std::string mission_type_to(MissionType m) {
  switch (m) {
    case MissionType::Dock: return "Dock";
    case MissionType::Sweep: return "Sweep";
    default: return "Hold";
  }
}

} // namespace

void ScenarioConfig::validate() const {
  if (!(duration > 0)) throw InvalidParameter("config: duration must be positive");
  if (physics_hz <= 0 || control_hz <= 0 || physics_hz % control_hz != 0)
    throw InvalidParameter("config: physics rate must be a positive multiple of the control rate");
  if (1.0 / physics_hz > 0.01)
    throw InvalidParameter("config: physics step must be at most 0.01 s");
  if (!(vehicle.mass > 0) || !(vehicle.body_length > 0))
    throw InvalidParameter("config: vehicle mass and body length must be positive");
  if (!(d_p > 0) || !(gripper.eps_g > 0) || !(proximity_D > 0))
    throw InvalidParameter("config: lengths must be positive");
  field.validate();
  lqr.validate();
  if (!(mission.t_h > 0)) throw InvalidParameter("config: t_h must be positive");
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  ScenarioConfig c; // defaults
  c.seed = j.value("seed", c.seed);
  c.duration = j.value("duration_s", c.duration);
  c.physics_hz = j.value("physics_hz", c.physics_hz);
  c.control_hz = j.value("control_hz", c.control_hz);
  if (j.contains("vehicle")) {
    const auto& v = j["vehicle"];
    c.vehicle.mass = v.value("mass_kg", c.vehicle.mass);
    c.vehicle.body_length = v.value("body_length_m", c.vehicle.body_length);
    c.vehicle.att_tau = v.value("att_tau_s", c.vehicle.att_tau);
    if (v.contains("accel_bias")) c.vehicle.accel_bias = vec3_from(v["accel_bias"], c.vehicle.accel_bias);
  }
  if (j.contains("field")) {
    const auto& f = j["field"];
    c.field.enabled = f.value("enabled", c.field.enabled);
    c.field.w0 = f.value("w0", c.field.w0);
    c.field.z_c = f.value("z_c", c.field.z_c);
    c.field.sigma0 = f.value("sigma0", c.field.sigma0);
    c.field.k_spread = f.value("k_spread", c.field.k_spread);
    c.field.c_a = f.value("c_a", c.field.c_a);
    c.field.lambda_r = f.value("lambda_r", c.field.lambda_r);
    c.field.turb_std_frac = f.value("turb_std_frac", c.field.turb_std_frac);
    c.field.turb_tau = f.value("turb_tau_s", c.field.turb_tau);
  }
  if (j.contains("lqr")) {
    const auto& l = j["lqr"];
    if (l.contains("q_p")) c.lqr.q_p = vec3_from(l["q_p"], c.lqr.q_p);
    if (l.contains("q_v")) c.lqr.q_v = vec3_from(l["q_v"], c.lqr.q_v);
    c.lqr.q_psi = l.value("q_psi", c.lqr.q_psi);
    if (l.contains("r_a")) c.lqr.r_a = vec3_from(l["r_a"], c.lqr.r_a);
    c.lqr.r_psi = l.value("r_psi", c.lqr.r_psi);
  }
  if (j.contains("leader")) {
    const auto& l = j["leader"];
    c.leader_mode = leader_mode_from(l.value("mode", leader_mode_to(c.leader_mode)));
    c.leader_alt = l.value("altitude_m", c.leader_alt);
    c.leader_speed = l.value("speed_mps", c.leader_speed);
  }
  if (j.contains("platform")) {
    const auto& p = j["platform"];
    c.platform_enabled = p.value("enabled", c.platform_enabled);
    c.d_p = p.value("d_p_m", c.d_p);
    c.platform_damping = p.value("damping_ratio", c.platform_damping);
  }
  if (j.contains("gripper")) {
    const auto& g = j["gripper"];
    c.gripper.eps_g = g.value("eps_g_m", c.gripper.eps_g);
    c.gripper.eps_contact = g.value("eps_contact_m", c.gripper.eps_contact);
    c.gripper.latency = g.value("latency_s", c.gripper.latency);
    c.gripper.tau_servo = g.value("tau_servo_s", c.gripper.tau_servo);
    if (g.contains("tip_offset")) c.gripper.tip_offset = vec3_from(g["tip_offset"], c.gripper.tip_offset);
  }
  if (j.contains("coupling")) {
    const auto& k = j["coupling"];
    c.coupling.tau_ramp = k.value("tau_ramp_s", c.coupling.tau_ramp);
    c.coupling.notify_delay = k.value("notify_delay_s", c.coupling.notify_delay);
  }
  c.proximity_D = j.value("proximity_D_m", c.proximity_D);
  c.compensation = compensation_from(j.value("compensation", compensation_to(c.compensation)));
  c.model_path = j.value("model_path", c.model_path);
  if (j.contains("mission")) {
    const auto& m = j["mission"];
    c.mission.type = mission_type_from(m.value("type", mission_type_to(c.mission.type)));
    c.mission.t_plan = m.value("t_plan_s", c.mission.t_plan);
    c.mission.t_h = m.value("t_h_s", c.mission.t_h);
    c.mission.timeout_margin = m.value("timeout_margin_s", c.mission.timeout_margin);
    c.mission.docking_enabled = m.value("docking_enabled", c.mission.docking_enabled);
    c.mission.auto_close_dist = m.value("auto_close_dist_m", c.mission.auto_close_dist);
    if (m.contains("bravo_start_offset"))
      c.mission.bravo_start_offset = vec3_from(m["bravo_start_offset"], c.mission.bravo_start_offset);
    if (m.contains("bravo_start_vel"))
      c.mission.bravo_start_vel = vec3_from(m["bravo_start_vel"], c.mission.bravo_start_vel);
    if (m.contains("sweep")) {
      const auto& s = m["sweep"];
      auto& sw = c.mission.sweep;
      sw.stage = s.value("stage", sw.stage);
      sw.dz_top = s.value("dz_top_m", sw.dz_top);
      sw.dz_bottom = s.value("dz_bottom_m", sw.dz_bottom);
      sw.radius = s.value("radius_m", sw.radius);
      sw.radial_period = s.value("radial_period_s", sw.radial_period);
      sw.azimuth_period = s.value("azimuth_period_s", sw.azimuth_period);
      sw.duration = s.value("duration_s", sw.duration);
      sw.calib_duration = s.value("calib_duration_s", sw.calib_duration);
      if (s.contains("calib_offset")) sw.calib_offset = vec3_from(s["calib_offset"], sw.calib_offset);
    }
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidParameter("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json_text(ss.str());
}

std::string ScenarioConfig::to_json_text() const {
  json j;
  j["seed"] = seed;
  j["duration_s"] = duration;
  j["physics_hz"] = physics_hz;
  j["control_hz"] = control_hz;
  j["vehicle"] = {{"mass_kg", vehicle.mass},
                  {"body_length_m", vehicle.body_length},
                  {"att_tau_s", vehicle.att_tau},
                  {"accel_bias", vec3_to(vehicle.accel_bias)}};
  j["field"] = {{"enabled", field.enabled},
                {"w0", field.w0},
                {"z_c", field.z_c},
                {"sigma0", field.sigma0},
                {"k_spread", field.k_spread},
                {"c_a", field.c_a},
                {"lambda_r", field.lambda_r},
                {"turb_std_frac", field.turb_std_frac},
                {"turb_tau_s", field.turb_tau}};
  j["lqr"] = {{"q_p", vec3_to(lqr.q_p)},
              {"q_v", vec3_to(lqr.q_v)},
              {"q_psi", lqr.q_psi},
              {"r_a", vec3_to(lqr.r_a)},
              {"r_psi", lqr.r_psi}};
  j["leader"] = {{"mode", leader_mode_to(leader_mode)},
                 {"altitude_m", leader_alt},
                 {"speed_mps", leader_speed}};
  j["platform"] = {{"enabled", platform_enabled},
                   {"d_p_m", d_p},
                   {"damping_ratio", platform_damping}};
  j["gripper"] = {{"eps_g_m", gripper.eps_g},
                  {"eps_contact_m", gripper.eps_contact},
                  {"latency_s", gripper.latency},
                  {"tau_servo_s", gripper.tau_servo},
                  {"tip_offset", vec3_to(gripper.tip_offset)}};
  j["coupling"] = {{"tau_ramp_s", coupling.tau_ramp},
                   {"notify_delay_s", coupling.notify_delay}};
  j["proximity_D_m"] = proximity_D;
  j["compensation"] = compensation_to(compensation);
  j["model_path"] = model_path;
  json sw = {{"stage", mission.sweep.stage},
             {"dz_top_m", mission.sweep.dz_top},
             {"dz_bottom_m", mission.sweep.dz_bottom},
             {"radius_m", mission.sweep.radius},
             {"radial_period_s", mission.sweep.radial_period},
             {"azimuth_period_s", mission.sweep.azimuth_period},
             {"duration_s", mission.sweep.duration},
             {"calib_duration_s", mission.sweep.calib_duration},
             {"calib_offset", vec3_to(mission.sweep.calib_offset)}};
  j["mission"] = {{"type", mission_type_to(mission.type)},
                  {"t_plan_s", mission.t_plan},
                  {"t_h_s", mission.t_h},
                  {"timeout_margin_s", mission.timeout_margin},
                  {"docking_enabled", mission.docking_enabled},
                  {"auto_close_dist_m", mission.auto_close_dist},
                  {"bravo_start_offset", vec3_to(mission.bravo_start_offset)},
                  {"bravo_start_vel", vec3_to(mission.bravo_start_vel)},
                  {"sweep", sw}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Scenario engine
// ---------------------------------------------------------------------------

namespace {

constexpr double kSweepSettle = kSweepSettleTime;

// Leader-relative sweep reference and its analytic derivatives.
Reference sweep_reference(const SweepParams& sw, const Vec3& leader_ref_p, double tau) {
  const double two_pi = 2.0 * kPi;
  const double wr = two_pi / sw.radial_period;
  const double wa = two_pi / sw.azimuth_period;
  const double Tz = sw.duration > 0 ? sw.duration / 2.0 : 1.0;
  const double wz = two_pi / Tz;

  const double rho = sw.radius * std::sin(wr * tau);
  const double rho_d = sw.radius * wr * std::cos(wr * tau);
  const double rho_dd = -sw.radius * wr * wr * std::sin(wr * tau);
  const double th = wa * tau;
  const double c = std::cos(th), s = std::sin(th);

  const double half_band = 0.5 * (sw.dz_top - sw.dz_bottom);
  const double dz = sw.dz_bottom + half_band * (1.0 + std::cos(wz * tau));
  const double dz_d = -half_band * wz * std::sin(wz * tau);
  const double dz_dd = -half_band * wz * wz * std::cos(wz * tau);

  Reference r;
  r.p = leader_ref_p + Vec3(rho * c, rho * s, dz);
  r.v = Vec3(rho_d * c - rho * s * wa, rho_d * s + rho * c * wa, dz_d);
  r.a = Vec3(rho_dd * c - 2 * rho_d * s * wa - rho * c * wa * wa,
             rho_dd * s + 2 * rho_d * c * wa - rho * s * wa * wa, dz_dd);
  return r;
}

class Engine {
 public:
  Engine(const ScenarioConfig& cfg, const MlpModel* model)
      : cfg_(cfg),
        turb_(Prng::mix(cfg.seed, 0x7451u)),
        model_(model) {
    cfg_.validate();
    if (!model_ && cfg_.compensation == Compensation::Model) {
      if (cfg_.model_path.empty())
        throw InvalidParameter("compensation=Model requires a model");
      owned_model_ = MlpModel::load(cfg_.model_path);
      model_ = &owned_model_;
    }

    dt_phys_ = 1.0 / cfg_.physics_hz;
    dt_ctl_ = 1.0 / cfg_.control_hz;
    n_sub_ = cfg_.physics_hz / cfg_.control_hz;

    gains_ = solve_lqr(cfg_.lqr, linear_model(cfg_.vehicle.mass));

    alpha_.p = Vec3(0, 0, -cfg_.leader_alt);
    alpha_.m = cfg_.vehicle.mass;
    if (cfg_.leader_mode == LeaderMode::ConstantVelocity)
      alpha_.v = Vec3(cfg_.leader_speed, 0, 0);

    plat_.d_p = cfg_.d_p;
    plat_.damping_ratio = cfg_.platform_damping;
    grip_.params = cfg_.gripper;

    goal_rest_ = alpha_.p + plat_.anchor_offset + Vec3(0, 0, cfg_.d_p) -
                 cfg_.gripper.tip_offset;

    bravo_.m = cfg_.vehicle.mass;
    if (cfg_.mission.type == MissionType::Sweep) {
      bravo_.p = alpha_.p + cfg_.mission.sweep.calib_offset;
    } else {
      bravo_.p = goal_rest_ + cfg_.mission.bravo_start_offset;
      bravo_.v = cfg_.mission.bravo_start_vel;
    }
  }

  RunResult run() {
    RunResult out;
    const long n_ticks = std::lround(cfg_.duration * cfg_.control_hz);
    for (long k = 0; k < n_ticks; ++k) {
      const double t = k * dt_ctl_;
      check_finite(t);
      mission_update(t);

      const Reference ref_a = leader_reference(t);
      const Reference ref_b = bravo_reference(t);

      // Leader controller (skipped for a rigidly mounted stand).
      InnerLoopCommand cmd_a;
      if (cfg_.leader_mode != LeaderMode::RigidMount) {
        const ControlInput ua =
            feedback(alpha_.state_vector(), ref_to_state(ref_a), ref_a.a, gains_);
        const double mass_ff =
            docked_ ? leader_feedforward_mass(t, t_dock_, cfg_.vehicle.mass,
                                              cfg_.vehicle.mass, cfg_.coupling)
                    : cfg_.vehicle.mass;
        cmd_a = invert_dynamics(ua.a, alpha_.psi + ua.psi_dot * dt_ctl_, mass_ff);
      }

      // Follower controller.
      RelativeState9 x9{bravo_.p - alpha_.p, alpha_.v, bravo_.v};
      Vec3 f_pred = Vec3::Zero();
      switch (cfg_.compensation) {
        case Compensation::None:
          break;
        case Compensation::Model:
          f_pred = predict(*model_, x9, rot_z(alpha_.psi).transpose());
          break;
        case Compensation::Observer:
          f_pred = observer_.f_hat;
          break;
        case Compensation::Perfect:
          f_pred = true_field_now();
          break;
      }
      ControlInput ub = feedback(bravo_.state_vector(), ref_to_state(ref_b), ref_b.a, gains_);
      ub = compensate(ub, f_pred);
      InnerLoopCommand cmd_b =
          invert_dynamics(ub.a, bravo_.psi + ub.psi_dot * dt_ctl_, bravo_.m);

      if (cfg_.compensation == Compensation::Observer)
        observer_ = observer_update(observer_, bravo_.state_vector(), ub, dt_ctl_);

      handle_labels(t, x9, ub, &out);
      maybe_auto_close(t);
      log_row(t, ref_b, ub, f_pred, &out.log);

      for (int i = 0; i < n_sub_; ++i)
        physics_substep(t + i * dt_phys_, cmd_a, cmd_b);
    }

    const double end_time =
        docked_ ? t_dock_ : (miss_declared_ ? miss_time_ : cfg_.duration);
    out.summary = summarize(out.log, docked_, end_time);
    out.estimated_bias = bias_;
    return out;
  }

 private:
  Vec7 ref_to_state(const Reference& r) const {
    Vec7 x;
    x << r.p, r.v, r.psi;
    return x;
  }

  void check_finite(double t) const {
    if (!all_finite(alpha_.p) || !all_finite(alpha_.v) || !all_finite(bravo_.p) ||
        !all_finite(bravo_.v))
      throw SimulationFault("run aborted: non-finite vehicle state at t=" +
                            std::to_string(t));
  }

  Vec3 true_field_now() {
    Vec3 f = Vec3::Zero();
    if (cfg_.field.enabled) f = mean_force(alpha_, bravo_, cfg_.field);
    if (cfg_.field.turb_std_frac > 0) f += turb_.ou;
    return f;
  }

  Reference leader_reference(double t) const {
    Reference r;
    r.p = Vec3(0, 0, -cfg_.leader_alt);
    if (cfg_.leader_mode == LeaderMode::ConstantVelocity) {
      r.p.x() += cfg_.leader_speed * t;
      r.v = Vec3(cfg_.leader_speed, 0, 0);
    }
    return r;
  }

  void mission_update(double t) {
    if (cfg_.mission.type != MissionType::Dock) return;
    const auto& ms = cfg_.mission;

    if (!traj_ && t >= ms.t_plan && !docked_ && !miss_declared_) {
      MotionState start{bravo_.p, bravo_.v, Vec3::Zero()};
      const MotionState goal = predict_platform(alpha_, plat_.anchor_offset, t,
                                                t + ms.t_h, cfg_.d_p,
                                                cfg_.gripper.tip_offset);
      const HoldMode hold = cfg_.leader_mode == LeaderMode::ConstantVelocity
                                ? HoldMode::TrackLeader
                                : HoldMode::HoldPoint;
      traj_ = QuinticTrajectory::plan(start, goal, t, ms.t_h, hold, alpha_.psi);
    }

    // Timeout abort.
    if (!docked_ && !miss_declared_ && ms.docking_enabled &&
        t > ms.t_plan + ms.t_h + ms.timeout_margin) {
      miss_declared_ = true;
      miss_time_ = t;
      if (dock_state_ != DockState::Docked) dock_state_ = DockState::Missed;
    }

    // Wind down after a miss: descend out of the downwash and hold.
    if (miss_declared_ && !descend_planned_) {
      MotionState start{bravo_.p, bravo_.v, Vec3::Zero()};
      MotionState goal;
      goal.p = bravo_.p + Vec3(0, 0, 1.2);
      traj_ = QuinticTrajectory::plan(start, goal, t, 2.5, HoldMode::HoldPoint, bravo_.psi);
      descend_planned_ = true;
    }
  }

  Reference bravo_reference(double t) {
    switch (cfg_.mission.type) {
      case MissionType::Hold: {
        Reference r;
        r.p = goal_rest_ + cfg_.mission.bravo_start_offset;
        return r;
      }
      case MissionType::Sweep: {
        const auto& sw = cfg_.mission.sweep;
        const Vec3 leader_ref_p = leader_reference(t).p;
        if (t < sw.calib_duration) {
          Reference r;
          r.p = leader_ref_p + sw.calib_offset;
          return r;
        }
        return sweep_reference(sw, leader_ref_p, t - sw.calib_duration);
      }
      case MissionType::Dock:
      default: {
        if (traj_) return traj_->sample(t);
        Reference r;
        r.p = goal_rest_ + cfg_.mission.bravo_start_offset;
        return r;
      }
    }
  }

  // Residual-label bookkeeping for Sweep missions: finish the previous
  // tick's sample with the velocity now observed, then stash this tick.
  void handle_labels(double t, const RelativeState9& x9, const ControlInput& ub,
                     RunResult* out) {
    if (cfg_.mission.type != MissionType::Sweep) return;
    const auto& sw = cfg_.mission.sweep;
    const double sweep_t = t - sw.calib_duration - kSweepSettle;

    if (pending_) {
      const Vec3 a_obs = (bravo_.v - pending_->v_b) / dt_ctl_;
      if (pending_->calib) {
        calib_a_obs_.push_back(a_obs);
        calib_u_.push_back(pending_->u);
      } else if (bias_ready_) {
        TrainingSample s;
        s.x9 = pending_->x9;
        s.label = make_label(a_obs, pending_->u, bias_);
        s.stage = sw.stage;
        s.t = pending_->t;
        out->samples.push_back(s);
      }
      pending_.reset();
    }

    if (!bias_ready_ && t >= sw.calib_duration) {
      if (!calib_a_obs_.empty()) bias_ = estimate_bias(calib_a_obs_, calib_u_);
      bias_ready_ = true;
    }

    const bool in_calib = t >= 0.5 && t < sw.calib_duration - dt_ctl_;
    const bool in_sweep = sweep_t >= 0.0 && sweep_t < sw.duration - dt_ctl_;
    if (in_calib || in_sweep)
      pending_ = Pending{x9, ub, bravo_.v, t, in_calib};
  }

  void maybe_auto_close(double t) {
    if (cfg_.mission.type != MissionType::Dock || !cfg_.mission.docking_enabled)
      return;
    if (docked_ || miss_declared_ || grip_.gate != GateState::Open) return;
    if (!traj_ || cfg_.mission.auto_close_dist <= 0) return;
    const Vec3 bar = plat_.bar_position(alpha_);
    const Vec3 tip = bravo_.p + cfg_.gripper.tip_offset;
    if ((bar - tip).norm() < cfg_.mission.auto_close_dist) grip_.command_close(t);
  }

  void log_row(double t, const Reference& ref_b, const ControlInput& ub,
               const Vec3& f_pred, SimLog* log) {
    TickRow r;
    r.t = t;
    r.p_a = alpha_.p;
    r.v_a = alpha_.v;
    r.psi_a = alpha_.psi;
    r.p_b = bravo_.p;
    r.v_b = bravo_.v;
    r.psi_b = bravo_.psi;
    r.ref_p = ref_b.p;
    r.ref_v = ref_b.v;
    r.cmd_a = ub.a;
    r.cmd_psi_dot = ub.psi_dot;
    r.f_ext = true_field_now();
    r.f_pred = f_pred;
    r.bar = cfg_.platform_enabled ? plat_.bar_position(alpha_) : Vec3::Zero();
    r.dock_state = static_cast<int>(dock_state_);
    r.in_proximity = (alpha_.p - bravo_.p).norm() < cfg_.proximity_D ? 1 : 0;
    log->rows.push_back(r);
  }

  void physics_substep(double t, const InnerLoopCommand& cmd_a,
                       const InnerLoopCommand& cmd_b) {
    // Disturbances from the pre-step snapshot.
    Vec3 f_b = Vec3::Zero();
    if (cfg_.field.enabled) {
      const Vec3 mean = mean_force(alpha_, bravo_, cfg_.field);
      f_b = (cfg_.field.turb_std_frac > 0)
                ? sample_force(mean, turb_, cfg_.field, dt_phys_)
                : mean;
    }

    Vec3 f_a = cfg_.vehicle.accel_bias;
    if (docked_)
      f_a.z() += leader_extra_load_accel(t, t_dock_, cfg_.vehicle.mass,
                                         cfg_.vehicle.mass, cfg_.coupling);

    const VehicleState alpha_prev = alpha_;
    if (cfg_.leader_mode != LeaderMode::RigidMount)
      alpha_ = step(alpha_, cmd_a, f_a, dt_phys_, cfg_.vehicle.att_tau);
    const Vec3 a_anchor = (alpha_.v - alpha_prev.v) / dt_phys_;

    if (cfg_.platform_enabled)
      plat_ = platform_step(alpha_, a_anchor, plat_, dt_phys_);

    if (docked_) {
      // Rigid attachment: the follower rides the bar.
      bravo_.p = plat_.bar_position(alpha_) - cfg_.gripper.tip_offset;
      bravo_.v = plat_.bar_velocity(alpha_);
    } else {
      bravo_ = step(bravo_, cmd_b, f_b + cfg_.vehicle.accel_bias, dt_phys_,
                    cfg_.vehicle.att_tau);
    }

    if (cfg_.platform_enabled && cfg_.mission.docking_enabled &&
        cfg_.mission.type == MissionType::Dock && !docked_ && !grip_.event_emitted) {
      const Vec3 bar = plat_.bar_position(alpha_);
      const Vec3 tip = bravo_.p + cfg_.gripper.tip_offset;
      const auto ev = gripper_step(grip_, bar - tip,
                                   plat_.bar_velocity(alpha_) - bravo_.v, t, dt_phys_);
      if (!grip_.contact_queue.empty() && dock_state_ == DockState::Approach)
        dock_state_ = DockState::ContactPending;
      if (ev) {
        if (ev->type == DockEventType::Docked) {
          docked_ = true;
          t_dock_ = ev->t;
          dock_state_ = DockState::Docked;
        } else {
          miss_declared_ = true;
          miss_time_ = ev->t;
          dock_state_ = DockState::Missed;
        }
      }
    }
  }

  ScenarioConfig cfg_;
  TurbulenceState turb_;
  const MlpModel* model_ = nullptr;
  MlpModel owned_model_;

  double dt_phys_ = 0.002, dt_ctl_ = 0.02;
  int n_sub_ = 10;

  VehicleState alpha_, bravo_;
  PlatformState plat_;
  GripperState grip_;
  GainMatrix gains_;
  ObserverState observer_;

  Vec3 goal_rest_ = Vec3::Zero();
  std::optional<QuinticTrajectory> traj_;
  DockState dock_state_ = DockState::Approach;
  bool docked_ = false;
  bool miss_declared_ = false;
  bool descend_planned_ = false;
  double t_dock_ = -1.0;
  double miss_time_ = -1.0;

  struct Pending {
    RelativeState9 x9;
    ControlInput u;
    Vec3 v_b;
    double t;
    bool calib;
  };
  std::optional<Pending> pending_;
  std::vector<Vec3> calib_a_obs_;
  std::vector<ControlInput> calib_u_;
  Vec3 bias_ = Vec3::Zero();
  bool bias_ready_ = false;
};

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const MlpModel* model) {
  Engine engine(cfg, model);
  return engine.run();
}

} // namespace docksim
