#pragma once

#include <map>

#include "docksim/scenario.hpp"

namespace docksim {

// --- Static-offset study: rigidly mounted leader, sweep of cable lengths ---

struct StaticOffsetRow {
  double offset = 0.0;
  RunSummary without_model;
  RunSummary with_model;
};

inline std::vector<double> default_static_offsets() {
  return {0.36, 0.47, 0.64, 0.87, 1.11, 1.35};
}

std::vector<StaticOffsetRow> exp_static_offsets(const std::vector<double>& offsets,
                                                const ScenarioConfig& base,
                                                const MlpModel* model, int jobs = 1);

void write_table_csv(const std::string& path, const std::vector<StaticOffsetRow>& rows);

// --- Hover docking: free-hovering leader, randomized follower starts ---

struct HoverRun {
  RunSummary summary;
  Vec3 start_offset = Vec3::Zero();
  Vec3 start_vel = Vec3::Zero();
};

struct HoverResult {
  int docks = 0;
  std::vector<HoverRun> runs;
};

HoverResult exp_hover_docking(int n, const ScenarioConfig& base,
                              const MlpModel* model, int jobs = 1);

std::string hover_result_to_json(const HoverResult& r);

// --- Moving leader: constant-velocity leader, meet at 6 s, hold 5 s ---

// Mean tracking-error curve across the repeated runs (error = follower
// position minus its reference, averaged per tick over runs).
struct TrackingCurve {
  std::vector<double> t;
  std::vector<Vec3> mean_err;
};

double window_mean_alt(const TrackingCurve& c, double t0, double t1);
double window_mean_3d(const TrackingCurve& c, double t0, double t1);

struct MovingLeaderResult {
  std::map<std::string, TrackingCurve> curves; // keys: None, Model, Observer
};

MovingLeaderResult exp_moving_leader(const ScenarioConfig& base, const MlpModel* model,
                                     int runs = 10, int jobs = 1);

void write_moving_csv(const std::string& path, const MovingLeaderResult& r);

// Experiment scenario builders (also used by the acceptance suite).
ScenarioConfig make_static_config(const ScenarioConfig& base, double offset,
                                  bool with_model, int run_index);
ScenarioConfig make_hover_config(const ScenarioConfig& base, bool with_model,
                                 int run_index, Vec3* start_offset_out = nullptr,
                                 Vec3* start_vel_out = nullptr);
ScenarioConfig make_moving_config(const ScenarioConfig& base, Compensation comp,
                                  int run_index);

} // namespace docksim
