#pragma once

#include <functional>
#include <optional>
#include <string>

#include "docksim/control.hpp"
#include "docksim/docking.hpp"
#include "docksim/downwash_field.hpp"
#include "docksim/mlp.hpp"
#include "docksim/outputs.hpp"
#include "docksim/training.hpp"
#include "docksim/trajectory.hpp"

namespace docksim {

enum class LeaderMode { RigidMount, Hover, ConstantVelocity };

enum class Compensation {
  None,     // plain LQR
  Model,    // learned downwash prediction at the control rate
  Observer, // fixed-gain disturbance observer baseline
  Perfect,  // true-field cancellation (analysis oracle)
};

enum class MissionType {
  Dock,  // plan an approach onto the platform, then hold / couple
  Sweep, // curriculum data collection below the leader
  Hold,  // station-keep at the start point (baseline checks)
};

struct VehicleParams {
  double mass = 0.7;         // kg
  double body_length = 0.27; // m
  double att_tau = 0.05;     // inner attitude loop time constant, s (0 = ideal)
  Vec3 accel_bias = Vec3(0.05, -0.04, 0.08); // commanded-vs-achieved offset, m/s^2
};

// Scripted lateral sweeps for one curriculum stage: a rotating signed-radius
// figure through the jet at separations inside [dz_bottom, dz_top].
struct SweepParams {
  int stage = 0;
  double dz_top = 1.8;    // largest vertical separation in the band, m
  double dz_bottom = 1.5; // smallest, m
  double radius = 0.8;    // lateral excursion, m
  double radial_period = 16.0;  // s per in-out-in pass
  double azimuth_period = 23.0; // s per sweep-plane rotation
  double duration = 60.0;       // sampling time, s (excludes calibration)
  double calib_duration = 3.0;  // disturbance-free bias calibration, s
  Vec3 calib_offset = Vec3(2.0, 0.0, 2.4); // relative to leader, outside the jet
};

struct MissionParams {
  MissionType type = MissionType::Dock;
  double t_plan = 0.25;        // s, when the approach trajectory is planned
  double t_h = 4.0;            // approach horizon, s
  double timeout_margin = 2.0; // miss if no dock by t_plan + t_h + margin
  bool docking_enabled = true;
  double auto_close_dist = 0.05; // software close trigger distance, m
  Vec3 bravo_start_offset = Vec3(0.3, 0.0, 1.2); // relative to the rest goal
  Vec3 bravo_start_vel = Vec3::Zero();
  SweepParams sweep;
};

struct ScenarioConfig {
  uint64_t seed = 1;
  double duration = 8.0;
  int physics_hz = 500;
  int control_hz = 50;

  VehicleParams vehicle;
  FieldParams field;
  LqrWeights lqr;

  LeaderMode leader_mode = LeaderMode::Hover;
  double leader_alt = 2.5;    // m above ground (NED z = -leader_alt)
  double leader_speed = 0.25; // m/s north, ConstantVelocity mode

  bool platform_enabled = true;
  double d_p = 0.36;
  double platform_damping = 0.05;
  GripperParams gripper;
  CouplingParams coupling;
  double proximity_D = 0.54; // 2 body lengths; telemetry gate

  Compensation compensation = Compensation::None;
  std::string model_path; // loaded when compensation == Model and non-empty

  MissionParams mission;

  void validate() const;
  static ScenarioConfig from_json_file(const std::string& path);
  static ScenarioConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

struct RunResult {
  SimLog log;
  RunSummary summary;
  std::vector<TrainingSample> samples; // filled by Sweep missions
  Vec3 estimated_bias = Vec3::Zero();  // from the calibration segment
};

// Settling window after the hop from the calibration point onto the sweep
// pattern; no samples are recorded during it.
inline constexpr double kSweepSettleTime = 3.0;

// Runs one deterministic scenario. If `model` is null and the config names a
// model path, it is loaded from disk.
RunResult run_scenario(const ScenarioConfig& cfg, const MlpModel* model = nullptr);

} // namespace docksim
