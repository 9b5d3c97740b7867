// docksim command-line front end: data collection, training, single runs,
// experiment sweeps, and the property-check suite.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "docksim/checks.hpp"
#include "docksim/curriculum.hpp"
#include "docksim/experiments.hpp"
#include "docksim/scenario.hpp"

namespace fs = std::filesystem;
using namespace docksim;

namespace {

void emit_error_json(const std::string& msg) {
  nlohmann::json j;
  j["error"] = msg;
  std::cout << j.dump() << std::endl;
}

ScenarioConfig load_config(const std::string& path) {
  if (path.empty()) return ScenarioConfig{};
  return ScenarioConfig::from_json_file(path);
}

int cmd_config(const std::string& out_path) {
  const std::string text = ScenarioConfig{}.to_json_text();
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out_path);
    os << text;
    if (!os) throw SimulationFault("cannot write " + out_path);
  }
  return 0;
}

int cmd_collect(const std::string& config_path, const std::string& out_dir,
                double total_duration, int epochs) {
  CurriculumConfig cc;
  if (!config_path.empty()) cc.base = ScenarioConfig::from_json_file(config_path);
  if (total_duration > 0) cc.total_duration = total_duration;
  if (epochs > 0) cc.hyper.epochs = epochs;
  // Deployment models need coverage down to the docking offset itself, so
  // two fine-approach bands are appended below the standard 0.5 m floor.
  cc.stages = default_stages();
  cc.stages.push_back({0.5, 0.42});
  cc.stages.push_back({0.42, 0.34});

  fs::create_directories(out_dir);
  const CurriculumResult res = run_curriculum(cc);

  // One CSV per stage plus the trained models.
  for (size_t k = 0; k < cc.stages.size(); ++k) {
    std::vector<TrainingSample> stage_rows;
    for (const auto& s : res.all_samples)
      if (s.stage == static_cast<int>(k)) stage_rows.push_back(s);
    save_dataset_csv(out_dir + "/stage" + std::to_string(k) + ".csv", stage_rows);
    res.stage_models[k].save(out_dir + "/model_stage" + std::to_string(k) + ".txt");
  }
  res.final_model.save(out_dir + "/model.txt");

  nlohmann::json meta;
  meta["stages"] = nlohmann::json::array();
  for (size_t k = 0; k < cc.stages.size(); ++k)
    meta["stages"].push_back({{"dz_top_m", cc.stages[k].dz_top},
                              {"dz_bottom_m", cc.stages[k].dz_bottom},
                              {"samples", res.samples_per_stage[k]}});
  meta["total_samples"] = res.all_samples.size();
  meta["estimated_bias"] = {res.estimated_bias[0], res.estimated_bias[1],
                            res.estimated_bias[2]};
  std::ofstream os(out_dir + "/collect_meta.json");
  os << meta.dump(2) << "\n";
  std::cerr << "collected " << res.all_samples.size() << " samples over "
            << cc.stages.size() << " stages -> " << out_dir << "\n";
  return 0;
}

int cmd_train(const std::string& data_dir, const std::string& out_path,
              uint64_t seed, int epochs) {
  auto samples = load_dataset_dir(data_dir);
  TrainHyper h;
  h.seed = seed;
  if (epochs > 0) h.epochs = epochs;
  const TrainOutput out = train(samples, h);
  out.model.save(out_path);
  std::cerr << "trained on " << samples.size() << " samples, final train loss "
            << out.train_loss.back() << " -> " << out_path << "\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& model_path,
            const std::string& out_dir) {
  ScenarioConfig cfg = load_config(config_path);
  if (!model_path.empty()) {
    cfg.model_path = model_path;
    cfg.compensation = Compensation::Model;
  }
  const RunResult res = run_scenario(cfg);
  write_outputs(res.log, res.summary, out_dir);
  std::cout << summary_to_json(res.summary);
  return 0;
}

int cmd_exp(const std::string& which, const std::string& config_path,
            const std::string& model_path, int runs, int jobs,
            const std::string& out_dir) {
  ScenarioConfig base = load_config(config_path);
  MlpModel model;
  const MlpModel* model_ptr = nullptr;
  if (!model_path.empty()) {
    model = MlpModel::load(model_path);
    model_ptr = &model;
  }
  fs::create_directories(out_dir);

  if (which == "static") {
    if (!model_ptr) throw InvalidParameter("exp static needs --model");
    const auto rows = exp_static_offsets(default_static_offsets(), base, model_ptr, jobs);
    write_table_csv(out_dir + "/table.csv", rows);
    std::cout << "{\"table\": \"" << out_dir << "/table.csv\"}" << std::endl;
    return 0;
  }
  if (which == "hover") {
    if (model_ptr) base.compensation = Compensation::Model;
    const HoverResult res = exp_hover_docking(runs, base, model_ptr, jobs);
    const std::string text = hover_result_to_json(res);
    std::ofstream os(out_dir + "/hover.json");
    os << text;
    std::cout << text;
    return 0;
  }
  if (which == "moving") {
    const MovingLeaderResult res = exp_moving_leader(base, model_ptr, runs, jobs);
    write_moving_csv(out_dir + "/moving.csv", res);
    nlohmann::json j;
    for (const auto& [name, curve] : res.curves) {
      j[name]["entry_alt_err_m"] = window_mean_alt(curve, 4.0, 6.0);
      j[name]["hold_alt_err_m"] = window_mean_alt(curve, 6.0, 11.0);
      j[name]["hold_3d_err_m"] = window_mean_3d(curve, 6.0, 11.0);
    }
    std::ofstream os(out_dir + "/moving.json");
    os << j.dump(2) << "\n";
    std::cout << j.dump(2) << std::endl;
    return 0;
  }
  throw InvalidParameter("unknown experiment: " + which + " (use static|hover|moving)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"docksim: two-multirotor close-proximity docking simulator"};
  app.require_subcommand(1);

  auto* config_cmd = app.add_subcommand("config", "print the default scenario config");
  std::string config_out;
  config_cmd->add_option("--out", config_out, "write to file instead of stdout");

  auto* collect = app.add_subcommand("collect", "run the curriculum and collect training data");
  std::string collect_cfg, collect_out = "collect_out";
  double collect_duration = -1;
  int collect_epochs = -1;
  collect->add_option("--config", collect_cfg, "scenario config JSON");
  collect->add_option("--out", collect_out, "output directory")->required();
  collect->add_option("--duration", collect_duration, "total collection duration, s");
  collect->add_option("--epochs", collect_epochs, "per-stage training epochs");

  auto* train_cmd = app.add_subcommand("train", "train a downwash model from collected data");
  std::string train_data, train_out = "model.txt";
  uint64_t train_seed = 1;
  int train_epochs = -1;
  train_cmd->add_option("--data", train_data, "dataset directory")->required();
  train_cmd->add_option("--out", train_out, "model output path");
  train_cmd->add_option("--seed", train_seed, "training seed");
  train_cmd->add_option("--epochs", train_epochs, "training epochs");

  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  std::string run_cfg, run_model, run_out = "run_out";
  run_cmd->add_option("--config", run_cfg, "scenario config JSON");
  run_cmd->add_option("--model", run_model, "downwash model file");
  run_cmd->add_option("--out", run_out, "output directory");

  auto* exp_cmd = app.add_subcommand("exp", "run an experiment family");
  std::string exp_which, exp_cfg, exp_model, exp_out = "exp_out";
  int exp_runs = 10, exp_jobs = 1;
  exp_cmd->add_option("which", exp_which, "static|hover|moving")->required();
  exp_cmd->add_option("--config", exp_cfg, "scenario config JSON");
  exp_cmd->add_option("--model", exp_model, "downwash model file");
  exp_cmd->add_option("--runs", exp_runs, "number of runs");
  exp_cmd->add_option("--jobs", exp_jobs, "parallel workers");
  exp_cmd->add_option("--out", exp_out, "output directory");

  auto* check_cmd = app.add_subcommand("check", "run the property suites");
  (void)check_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) emit_error_json(e.what());
    return app.exit(e);
  }

  try {
    if (config_cmd->parsed()) return cmd_config(config_out);
    if (collect->parsed())
      return cmd_collect(collect_cfg, collect_out, collect_duration, collect_epochs);
    if (train_cmd->parsed())
      return cmd_train(train_data, train_out, train_seed, train_epochs);
    if (run_cmd->parsed()) return cmd_run(run_cfg, run_model, run_out);
    if (exp_cmd->parsed())
      return cmd_exp(exp_which, exp_cfg, exp_model, exp_runs, exp_jobs, exp_out);
    if (check_cmd->parsed()) return run_property_checks(std::cout) ? 0 : 2;
  } catch (const std::exception& e) {
    emit_error_json(e.what());
    return 1;
  }
  return 0;
}
