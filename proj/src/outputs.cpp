#include "docksim/outputs.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace docksim {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RunSummary summarize(const SimLog& log, bool docked, double end_time, double window) {
  RunSummary s;
  s.docked = docked;
  s.end_time = end_time;
  if (docked) s.dock_time = end_time;
  double n = 0;
  for (const auto& r : log.rows) {
    if (r.t < end_time - window || r.t > end_time) continue;
    s.mean_down_err += std::abs(r.p_b.z() - r.ref_p.z());
    s.mean_3d_err += (r.p_b - r.ref_p).norm();
    s.mean_f_pred += r.f_pred.norm();
    n += 1;
  }
  if (n > 0) {
    s.mean_down_err /= n;
    s.mean_3d_err /= n;
    s.mean_f_pred /= n;
  }
  return s;
}

std::string summary_to_json(const RunSummary& s) {
  nlohmann::json j;
  j["result"] = s.docked ? "Dock" : "Miss";
  j["dock_time_s"] = s.dock_time;
  j["end_time_s"] = s.end_time;
  j["mean_down_error_m"] = s.mean_down_err;
  j["mean_3d_error_m"] = s.mean_3d_err;
  j["mean_f_pred_mps2"] = s.mean_f_pred;
  j["window_definition"] =
      "means over the 0.5 s window ending at the dock or abort time";
  return j.dump(2) + "\n";
}

void write_log_csv(const SimLog& log, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw SimulationFault("write_log_csv: cannot open " + path);
  os << "t,pa_n,pa_e,pa_d,va_n,va_e,va_d,psi_a,"
        "pb_n,pb_e,pb_d,vb_n,vb_e,vb_d,psi_b,"
        "ref_n,ref_e,ref_d,refv_n,refv_e,refv_d,"
        "cmd_an,cmd_ae,cmd_ad,cmd_psidot,"
        "fext_n,fext_e,fext_d,fpred_n,fpred_e,fpred_d,"
        "bar_n,bar_e,bar_d,dock_state,in_proximity\n";
  auto v3 = [&](const Vec3& v) {
    os << format_double(v[0]) << ',' << format_double(v[1]) << ','
       << format_double(v[2]) << ',';
  };
  for (const auto& r : log.rows) {
    os << format_double(r.t) << ',';
    v3(r.p_a);
    v3(r.v_a);
    os << format_double(r.psi_a) << ',';
    v3(r.p_b);
    v3(r.v_b);
    os << format_double(r.psi_b) << ',';
    v3(r.ref_p);
    v3(r.ref_v);
    v3(r.cmd_a);
    os << format_double(r.cmd_psi_dot) << ',';
    v3(r.f_ext);
    v3(r.f_pred);
    v3(r.bar);
    os << r.dock_state << ',' << r.in_proximity << '\n';
  }
  if (!os) throw SimulationFault("write_log_csv: write failed for " + path);
}

void write_outputs(const SimLog& log, const RunSummary& summary, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SimulationFault("write_outputs: cannot create " + dir + ": " + ec.message());
  write_log_csv(log, dir + "/log.csv");
  std::ofstream os(dir + "/summary.json");
  if (!os) throw SimulationFault("write_outputs: cannot open " + dir + "/summary.json");
  os << summary_to_json(summary);
  if (!os) throw SimulationFault("write_outputs: write failed in " + dir);
}

} // namespace docksim
