#pragma once

#include "docksim/scenario.hpp"

namespace docksim {

// One curriculum stage: a vertical separation band to collect at.
struct StageBand {
  double dz_top;
  double dz_bottom;
};

// Paper-style staged collection: start far below the leader and step the
// band down by 0.3 m until data can be taken at about 0.5 m.
std::vector<StageBand> default_stages();

struct CurriculumConfig {
  ScenarioConfig base;            // Sweep mission template (field, vehicle, ...)
  std::vector<StageBand> stages = default_stages();
  double total_duration = 300.0;  // split evenly across stages, s
  TrainHyper hyper;               // per-stage retraining budget

  CurriculumConfig() {
    base.mission.type = MissionType::Sweep;
    base.platform_enabled = false;
    base.mission.docking_enabled = false;
    hyper.epochs = 500;
  }
};

struct CurriculumResult {
  MlpModel final_model;
  std::vector<TrainingSample> all_samples;
  std::vector<MlpModel> stage_models;    // model trained after each stage
  std::vector<size_t> samples_per_stage;
  Vec3 estimated_bias = Vec3::Zero();
};

// Runs every stage: fly scripted sweeps with the previous stage's model
// deployed (stage 0 flies uncompensated), accumulate labeled samples, and
// retrain on everything so far.
CurriculumResult run_curriculum(const CurriculumConfig& cfg);

} // namespace docksim
