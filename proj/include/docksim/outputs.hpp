#pragma once

#include <string>
#include <vector>

#include "docksim/common.hpp"
#include "docksim/docking.hpp"

namespace docksim {

// One control-tick snapshot. Column order here is the CSV column order.
struct TickRow {
  double t = 0.0;
  Vec3 p_a, v_a;
  double psi_a = 0.0;
  Vec3 p_b, v_b;
  double psi_b = 0.0;
  Vec3 ref_p, ref_v;
  Vec3 cmd_a;
  double cmd_psi_dot = 0.0;
  Vec3 f_ext;   // sampled true disturbance at the tick
  Vec3 f_pred;  // compensation applied by the controller
  Vec3 bar;     // docking bar position
  int dock_state = 0; // DockState as int
  int in_proximity = 0;
};

struct SimLog {
  std::vector<TickRow> rows;
};

struct RunSummary {
  bool docked = false;
  double dock_time = -1.0;     // < 0 when no dock happened
  double end_time = 0.0;       // dock or abort time the window ends at
  double mean_down_err = 0.0;  // mean |down error| over the final 0.5 s
  double mean_3d_err = 0.0;    // mean 3D error over the final 0.5 s
  double mean_f_pred = 0.0;    // mean |f_pred| over the final 0.5 s
};

// Window statistics over [end_time - window, end_time].
RunSummary summarize(const SimLog& log, bool docked, double end_time,
                     double window = 0.5);

std::string summary_to_json(const RunSummary& s);

// Writes log.csv and summary.json into dir (created if needed).
void write_outputs(const SimLog& log, const RunSummary& summary,
                   const std::string& dir);

void write_log_csv(const SimLog& log, const std::string& path);

std::string format_double(double v); // %.17g, used for all numeric output

} // namespace docksim
