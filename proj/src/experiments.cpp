#include "docksim/experiments.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <thread>

#include "json.hpp"
#include "docksim/outputs.hpp"

namespace docksim {

namespace {

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(jobs, n); ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

} // namespace

ScenarioConfig make_static_config(const ScenarioConfig& base, double offset,
                                  bool with_model, int run_index) {
  ScenarioConfig c = base;
  c.leader_mode = LeaderMode::RigidMount;
  c.platform_enabled = true;
  c.d_p = offset;
  c.mission.type = MissionType::Dock;
  c.compensation = with_model ? Compensation::Model : Compensation::None;
  c.duration = std::max(base.duration, c.mission.t_plan + c.mission.t_h +
                                           c.mission.timeout_margin + 1.0);
  c.seed = Prng::mix(base.seed, 0x5740 + 2 * run_index + (with_model ? 1 : 0));
  return c;
}

std::vector<StaticOffsetRow> exp_static_offsets(const std::vector<double>& offsets,
                                                const ScenarioConfig& base,
                                                const MlpModel* model, int jobs) {
  std::vector<StaticOffsetRow> rows(offsets.size());
  parallel_for(static_cast<int>(offsets.size()) * 2, jobs, [&](int idx) {
    const int i = idx / 2;
    const bool with_model = (idx % 2) == 1;
    const ScenarioConfig c = make_static_config(base, offsets[i], with_model, i);
    const RunResult r = run_scenario(c, with_model ? model : nullptr);
    rows[i].offset = offsets[i];
    (with_model ? rows[i].with_model : rows[i].without_model) = r.summary;
  });
  return rows;
}

void write_table_csv(const std::string& path, const std::vector<StaticOffsetRow>& rows) {
  std::ofstream os(path);
  if (!os) throw SimulationFault("write_table_csv: cannot open " + path);
  os << "offset_m,err_down_none,err_3d_none,f_pred_none,result_none,"
        "err_down_model,err_3d_model,f_pred_model,result_model\n";
  for (const auto& r : rows) {
    os << format_double(r.offset) << ','
       << format_double(r.without_model.mean_down_err) << ','
       << format_double(r.without_model.mean_3d_err) << ','
       << format_double(r.without_model.mean_f_pred) << ','
       << (r.without_model.docked ? "Dock" : "Miss") << ','
       << format_double(r.with_model.mean_down_err) << ','
       << format_double(r.with_model.mean_3d_err) << ','
       << format_double(r.with_model.mean_f_pred) << ','
       << (r.with_model.docked ? "Dock" : "Miss") << '\n';
  }
}

ScenarioConfig make_hover_config(const ScenarioConfig& base, bool with_model,
                                 int run_index, Vec3* start_offset_out,
                                 Vec3* start_vel_out) {
  ScenarioConfig c = base;
  c.leader_mode = LeaderMode::Hover;
  c.platform_enabled = true;
  c.mission.type = MissionType::Dock;
  c.compensation = with_model ? Compensation::Model : Compensation::None;
  c.duration = std::max(base.duration, c.mission.t_plan + c.mission.t_h +
                                           c.mission.timeout_margin + 1.0);
  c.seed = Prng::mix(base.seed, 0x9000 + run_index);

  // Randomized initial state, keyed by (seed, run index) so parallel sweeps
  // match serial ones.
  Prng rng(Prng::mix(base.seed, 0xA000 + run_index));
  Vec3 dpos, dvel;
  for (int i = 0; i < 3; ++i) dpos[i] = rng.uniform(-0.3, 0.3);
  for (int i = 0; i < 3; ++i) dvel[i] = rng.uniform(-0.1, 0.1);
  c.mission.bravo_start_offset = base.mission.bravo_start_offset + dpos;
  c.mission.bravo_start_vel = dvel;
  if (start_offset_out) *start_offset_out = c.mission.bravo_start_offset;
  if (start_vel_out) *start_vel_out = c.mission.bravo_start_vel;
  return c;
}

HoverResult exp_hover_docking(int n, const ScenarioConfig& base,
                              const MlpModel* model, int jobs) {
  if (n < 1) throw InvalidParameter("exp_hover_docking: need at least one run");
  HoverResult out;
  out.runs.resize(n);
  const bool with_model = base.compensation == Compensation::Model;
  parallel_for(n, jobs, [&](int i) {
    Vec3 so, sv;
    const ScenarioConfig c = make_hover_config(base, with_model, i, &so, &sv);
    const RunResult r = run_scenario(c, with_model ? model : nullptr);
    out.runs[i].summary = r.summary;
    out.runs[i].start_offset = so;
    out.runs[i].start_vel = sv;
  });
  for (const auto& r : out.runs) out.docks += r.summary.docked ? 1 : 0;
  return out;
}

std::string hover_result_to_json(const HoverResult& r) {
  nlohmann::json j;
  j["docks"] = r.docks;
  j["runs"] = nlohmann::json::array();
  for (const auto& run : r.runs) {
    nlohmann::json e;
    e["result"] = run.summary.docked ? "Dock" : "Miss";
    e["dock_time_s"] = run.summary.dock_time;
    e["mean_down_error_m"] = run.summary.mean_down_err;
    e["mean_3d_error_m"] = run.summary.mean_3d_err;
    e["start_offset"] = {run.start_offset[0], run.start_offset[1], run.start_offset[2]};
    j["runs"].push_back(e);
  }
  return j.dump(2) + "\n";
}

ScenarioConfig make_moving_config(const ScenarioConfig& base, Compensation comp,
                                  int run_index) {
  ScenarioConfig c = base;
  c.leader_mode = LeaderMode::ConstantVelocity;
  c.leader_speed = 0.25;
  c.platform_enabled = true;
  c.mission.type = MissionType::Dock;
  c.mission.docking_enabled = false; // tracking study, gate stays open
  c.mission.t_plan = 0.0;
  c.mission.t_h = 6.0;               // meet the target at 6 s...
  c.duration = 11.0;                 // ...then hold formation for 5 s
  c.mission.bravo_start_offset = Vec3(0, 0, 1.5);
  c.mission.bravo_start_vel = Vec3::Zero();
  c.compensation = comp;
  c.seed = Prng::mix(base.seed, 0xB000 + run_index);
  return c;
}

MovingLeaderResult exp_moving_leader(const ScenarioConfig& base, const MlpModel* model,
                                     int runs, int jobs) {
  MovingLeaderResult out;
  const std::pair<std::string, Compensation> modes[] = {
      {"None", Compensation::None},
      {"Model", Compensation::Model},
      {"Observer", Compensation::Observer},
  };
  for (const auto& [name, comp] : modes) {
    if (comp == Compensation::Model && model == nullptr) continue;
    std::vector<SimLog> logs(runs);
    parallel_for(runs, jobs, [&](int i) {
      const ScenarioConfig c = make_moving_config(base, comp, i);
      logs[i] = run_scenario(c, comp == Compensation::Model ? model : nullptr).log;
    });
    TrackingCurve curve;
    const size_t n_ticks = logs[0].rows.size();
    curve.t.resize(n_ticks);
    curve.mean_err.assign(n_ticks, Vec3::Zero());
    for (const auto& log : logs)
      for (size_t k = 0; k < n_ticks; ++k)
        curve.mean_err[k] += log.rows[k].p_b - log.rows[k].ref_p;
    for (size_t k = 0; k < n_ticks; ++k) {
      curve.t[k] = logs[0].rows[k].t;
      curve.mean_err[k] /= static_cast<double>(runs);
    }
    out.curves[name] = std::move(curve);
  }
  return out;
}

double window_mean_alt(const TrackingCurve& c, double t0, double t1) {
  double acc = 0, n = 0;
  for (size_t k = 0; k < c.t.size(); ++k) {
    if (c.t[k] < t0 || c.t[k] > t1) continue;
    acc += std::abs(c.mean_err[k].z());
    n += 1;
  }
  return n > 0 ? acc / n : 0.0;
}

double window_mean_3d(const TrackingCurve& c, double t0, double t1) {
  double acc = 0, n = 0;
  for (size_t k = 0; k < c.t.size(); ++k) {
    if (c.t[k] < t0 || c.t[k] > t1) continue;
    acc += c.mean_err[k].norm();
    n += 1;
  }
  return n > 0 ? acc / n : 0.0;
}

void write_moving_csv(const std::string& path, const MovingLeaderResult& r) {
  std::ofstream os(path);
  if (!os) throw SimulationFault("write_moving_csv: cannot open " + path);
  os << "t";
  for (const auto& [name, curve] : r.curves)
    os << ",err_down_" << name << ",err_3d_" << name;
  os << "\n";
  if (r.curves.empty()) return;
  const size_t n = r.curves.begin()->second.t.size();
  for (size_t k = 0; k < n; ++k) {
    os << format_double(r.curves.begin()->second.t[k]);
    for (const auto& [name, curve] : r.curves)
      os << ',' << format_double(curve.mean_err[k].z()) << ','
         << format_double(curve.mean_err[k].norm());
    os << "\n";
  }
}

} // namespace docksim
