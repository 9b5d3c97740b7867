#include "docksim/curriculum.hpp"

namespace docksim {

std::vector<StageBand> default_stages() {
  return {{1.8, 1.5}, {1.5, 1.2}, {1.2, 0.9}, {0.9, 0.6}, {0.6, 0.5}};
}

CurriculumResult run_curriculum(const CurriculumConfig& cfg) {
  if (cfg.stages.empty()) throw InvalidParameter("run_curriculum: no stages");
  for (size_t i = 1; i < cfg.stages.size(); ++i)
    if (cfg.stages[i].dz_top > cfg.stages[i - 1].dz_top + 1e-9)
      throw InvalidParameter("run_curriculum: stages must be ordered by decreasing separation");

  CurriculumResult out;
  const double stage_duration = cfg.total_duration / cfg.stages.size();

  for (size_t k = 0; k < cfg.stages.size(); ++k) {
    ScenarioConfig sc = cfg.base;
    sc.mission.type = MissionType::Sweep;
    sc.platform_enabled = false;
    sc.mission.docking_enabled = false;
    sc.seed = Prng::mix(cfg.base.seed, 0x100 + k);
    auto& sw = sc.mission.sweep;
    sw.stage = static_cast<int>(k);
    sw.dz_top = cfg.stages[k].dz_top;
    sw.dz_bottom = cfg.stages[k].dz_bottom;
    sw.duration = stage_duration;
    sc.duration = sw.calib_duration + kSweepSettleTime + sw.duration + 0.1;
    sc.compensation = (k == 0) ? Compensation::None : Compensation::Model;

    const MlpModel* deployed = (k == 0) ? nullptr : &out.stage_models.back();
    RunResult run = run_scenario(sc, deployed);
    out.samples_per_stage.push_back(run.samples.size());
    out.all_samples.insert(out.all_samples.end(), run.samples.begin(), run.samples.end());
    out.estimated_bias = run.estimated_bias;

    // Retrain on everything collected so far.
    TrainHyper h = cfg.hyper;
    h.seed = Prng::mix(cfg.hyper.seed, 0x200 + k);
    out.stage_models.push_back(train(out.all_samples, h).model);
  }

  out.final_model = out.stage_models.back();
  return out;
}

} // namespace docksim
