#include "vib2move/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "vib2move/errors.hpp"

namespace vib2move {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kMm = 1000.0;
constexpr double kDeg = 180.0 / kPi;

std::string fixed(double v, int digits = 4) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  // Avoid "-0.0000" so sign noise below the printed precision cannot make
  // otherwise equal files differ.
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string csv_field(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

// JSON has no NaN; metrics without successful trials are written as null.
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json report_json(const MetricsReport& r) {
  Json j;
  j["n_trials"] = r.trials.size();
  j["success_rate"] = r.success_rate;
  j["rmse_pos_mm"] = number_or_null(r.rmse_pos * kMm);
  j["rel_error_pct"] = number_or_null(r.rel_error_pct);
  j["rmse_orient_deg"] = number_or_null(r.rmse_angle * kDeg);
  Json rows = Json::array();
  for (const auto& m : r.per_object) {
    Json o;
    o["object"] = m.object;
    o["size_mm"] = {m.extents.x * kMm, m.extents.y * kMm};
    o["mass_g"] = m.mass * 1000.0;
    o["n_trials"] = m.n_trials;
    o["success_rate"] = m.success_rate;
    o["rmse_pos_mm"] = number_or_null(m.rmse_pos * kMm);
    o["rel_error_pct"] = number_or_null(m.rel_error_pct);
    o["rmse_orient_deg"] = number_or_null(m.rmse_angle * kDeg);
    rows.push_back(std::move(o));
  }
  j["per_object"] = std::move(rows);
  return j;
}

Json pose_json(const PoseSE2& p) {
  return {{"x_mm", p.x() * kMm}, {"y_mm", p.y() * kMm}, {"theta_deg", p.theta() * kDeg}};
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << kTrajectoryCsvHeader << '\n';
  for (const auto& r : trajectory) {
    out << r.step << ',' << fixed(r.finger_w.x() * kMm) << ',' << fixed(r.finger_w.y() * kMm)
        << ',' << fixed(r.finger_w.theta() * kDeg) << ',' << fixed(r.object_w.x() * kMm) << ','
        << fixed(r.object_w.y() * kMm) << ',' << fixed(r.object_w.theta() * kDeg) << ','
        << to_string(r.motion) << ',' << fixed(r.k, 6) << '\n';
  }
}

void write_actions_csv(std::ostream& out, const std::vector<ActionRecord>& actions) {
  out << "index,stage,pass,iteration,kind,finger_theta_deg,n_steps,"
         "believed_x_mm,believed_y_mm,believed_theta_deg,true_x_mm,true_y_mm,true_theta_deg,"
         "pc_estimate_x_mm,pc_estimate_y_mm,stage_error_mm,stage_error_deg\n";
  for (const auto& a : actions) {
    const bool angular = a.stage == Stage::kOrientation;
    out << a.index << ',' << to_string(a.stage) << ',' << a.pass << ',' << a.iteration << ','
        << to_string(a.kind) << ',' << fixed(a.finger_theta * kDeg) << ',' << a.n_steps << ','
        << fixed(a.believed_relative.x() * kMm) << ',' << fixed(a.believed_relative.y() * kMm)
        << ',' << fixed(a.believed_relative.theta() * kDeg) << ','
        << fixed(a.true_relative.x() * kMm) << ',' << fixed(a.true_relative.y() * kMm) << ','
        << fixed(a.true_relative.theta() * kDeg) << ','
        << fixed(a.pressure_center_estimate.x * kMm) << ','
        << fixed(a.pressure_center_estimate.y * kMm) << ','
        << (angular ? "" : fixed(a.stage_error * kMm)) << ','
        << (angular ? fixed(a.stage_error * kDeg) : "") << '\n';
  }
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials,
                      std::string_view run, bool header) {
  if (header) {
    out << "run,object,trial,start_x_mm,start_y_mm,start_theta_deg,goal_x_mm,goal_y_mm,"
           "goal_theta_deg,success,pos_error_mm,angle_error_deg,pulses,failure\n";
  }
  for (const auto& t : trials) {
    out << run << ',' << csv_field(t.object) << ',' << t.trial << ',' << fixed(t.start.x() * kMm)
        << ',' << fixed(t.start.y() * kMm) << ',' << fixed(t.start.theta() * kDeg) << ','
        << fixed(t.goal.x() * kMm) << ',' << fixed(t.goal.y() * kMm) << ','
        << fixed(t.goal.theta() * kDeg) << ',' << (t.success ? 1 : 0) << ','
        << fixed(t.pos_error * kMm) << ',' << fixed(t.angle_error * kDeg) << ',' << t.pulses
        << ',' << csv_field(t.failure) << '\n';
  }
}

void write_metrics_table_csv(std::ostream& out, const MetricsReport& report) {
  out << "Object,Size (mm),Mass (g),RMSE Pos. (mm),Rel. Error (%),RMSE Orient. (deg),"
         "Success (%),Trials\n";
  for (const auto& m : report.per_object) {
    out << csv_field(m.object) << ',' << fixed(m.extents.x * kMm, 0) << 'x'
        << fixed(m.extents.y * kMm, 0) << ',' << fixed(m.mass * 1000.0, 0) << ','
        << fixed(m.rmse_pos * kMm, 2) << ',' << fixed(m.rel_error_pct, 1) << ','
        << fixed(m.rmse_angle * kDeg, 2) << ',' << fixed(100.0 * m.success_rate, 1) << ','
        << m.n_trials << '\n';
  }
  out << "Average,,," << fixed(report.rmse_pos * kMm, 2) << ','
      << fixed(report.rel_error_pct, 1) << ',' << fixed(report.rmse_angle * kDeg, 2) << ','
      << fixed(100.0 * report.success_rate, 1) << ',' << report.trials.size() << '\n';
}

std::string plan_metrics_json(const Scenario& s, std::uint64_t seed, const PlanResult& result) {
  Json j;
  j["scenario"] = s.name;
  j["seed"] = seed;
  j["success"] = result.success;
  j["failure"] = result.failure ? Json(std::string(to_string(*result.failure))) : Json(nullptr);
  j["failure_message"] = result.failure_message;
  j["final_pos_error_mm"] = result.final_pos_error * kMm;
  j["final_angle_error_deg"] = result.final_angle_error * kDeg;
  j["goal"] = pose_json(s.goal_relative);
  j["n_actions"] = result.actions.size();
  j["n_pulses"] = result.pulse_count();
  Json stages = Json::array();
  for (const auto& log : result.stage_logs) {
    const double unit = log.stage == Stage::kOrientation ? kDeg : kMm;
    Json st;
    st["stage"] = std::string(to_string(log.stage));
    st["pass"] = log.pass;
    st["iterations"] = log.iterations;
    st["converged"] = log.converged;
    st[log.stage == Stage::kOrientation ? "start_error_deg" : "start_error_mm"] =
        log.start_error * unit;
    st[log.stage == Stage::kOrientation ? "end_error_deg" : "end_error_mm"] = log.end_error * unit;
    st["start_goal_distance_mm"] = log.start_goal_distance * kMm;
    st["end_goal_distance_mm"] = log.end_goal_distance * kMm;
    stages.push_back(std::move(st));
  }
  j["stages"] = std::move(stages);
  return j.dump(2) + "\n";
}

std::string evaluation_metrics_json(std::uint64_t seed, const MetricsReport* reconfiguration,
                                    const MetricsReport* single_pulse) {
  Json j;
  j["seed"] = seed;
  j["reconfiguration"] = reconfiguration ? report_json(*reconfiguration) : Json(nullptr);
  j["single_pulse"] = single_pulse ? report_json(*single_pulse) : Json(nullptr);
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace vib2move
