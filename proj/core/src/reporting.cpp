// Copyright 2026 The Infoplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "infoplan/reporting.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "infoplan/error.hpp"

namespace infoplan {
namespace {

constexpr const char* kStateNames[kStateDim] = {"rx", "ry", "rz", "qx", "qy", "qz", "qw",
                                                "vx", "vy", "vz", "wx", "wy", "wz"};
constexpr const char* kParamNames[kParamDim] = {"mass", "ixx", "iyy", "izz"};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

void check_written(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

double parse_real(std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error("malformed number '" + std::string(s) + "' in CSV");
  }
  return v;
}

PlanStatus parse_status(std::string_view s) {
  for (PlanStatus p : {PlanStatus::kConverged, PlanStatus::kStalled, PlanStatus::kIterationLimit,
                       PlanStatus::kDegraded}) {
    if (to_string(p) == s) return p;
  }
  throw Error("unknown plan status '" + std::string(s) + "'");
}

const char* health_name(HealthStatus h) {
  return h == HealthStatus::kHealthy ? "healthy" : "unhealthy";
}

HealthStatus parse_health(std::string_view s) {
  if (s == "healthy") return HealthStatus::kHealthy;
  if (s == "unhealthy") return HealthStatus::kUnhealthy;
  throw Error("unknown health flag '" + std::string(s) + "'");
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t c = line.find(',', start);
    cells.push_back(line.substr(start, c == std::string_view::npos ? std::string_view::npos
                                                                   : c - start));
    if (c == std::string_view::npos) break;
    start = c + 1;
  }
  return cells;
}

template <class Vec>
void put(std::string& s, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    s += ',';
    s += format_real(v[i]);
  }
}

nlohmann::json vec_json(const Vector4& v) {
  nlohmann::json j;
  for (int i = 0; i < kParamDim; ++i) j[kParamNames[i]] = v[i];
  return j;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

const std::vector<std::string>& episode_csv_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"t"};
    for (const char* prefix : {"true_", "fused_"}) {
      for (const char* n : kStateNames) c.push_back(std::string(prefix) + n);
    }
    for (const char* n : {"fx", "fy", "fz", "tx", "ty", "tz"}) c.emplace_back(n);
    for (const char* prefix : {"est_", "pvar_", "plan_"}) {
      for (const char* n : kParamNames) c.push_back(std::string(prefix) + n);
    }
    for (const char* n : {"gamma", "cost_total", "cost_tracking", "cost_info", "fim_trace",
                          "error_norm", "iterations", "plan_status", "health"}) {
      c.emplace_back(n);
    }
    return c;
  }();
  return cols;
}

void write_episode_csv(std::ostream& out, const EpisodeLog& log) {
  const auto& cols = episode_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  std::string line;
  for (const EpisodeRow& r : log.rows) {
    line = format_real(r.t);
    put(line, r.true_state.x);
    put(line, r.fused_state.x);
    put(line, r.u.as_vector());
    put(line, r.theta_hat.as_vector());
    put(line, r.p_diag);
    put(line, r.planner_theta.as_vector());
    for (double v : {r.gamma, r.cost_total, r.cost_tracking, r.cost_info, r.fim_trace,
                     r.error_norm}) {
      line += ',';
      line += format_real(v);
    }
    line += ',' + std::to_string(r.iterations) + ',' + to_string(r.plan_status) + ',' +
            health_name(r.health) + '\n';
    out << line;
  }
}

void write_episode_csv(const std::filesystem::path& path, const EpisodeLog& log) {
  auto out = open_out(path);
  write_episode_csv(out, log);
  check_written(out, path);
}

std::vector<EpisodeRow> read_episode_csv(std::istream& in) {
  const auto& cols = episode_csv_columns();
  std::string line;
  if (!std::getline(in, line)) throw Error("empty episode CSV");
  const auto header = split(line);
  if (header.size() != cols.size()) throw Error("episode CSV header has wrong column count");
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (header[i] != cols[i]) throw Error("unexpected CSV column '" + std::string(header[i]) + "'");
  }
  std::vector<EpisodeRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols.size()) {
      throw Error("episode CSV line " + std::to_string(line_no) + " has " +
                  std::to_string(cells.size()) + " cells");
    }
    std::size_t c = 0;
    auto next = [&] { return parse_real(cells[c++]); };
    EpisodeRow r;
    r.t = next();
    for (int i = 0; i < kStateDim; ++i) r.true_state.x[i] = next();
    for (int i = 0; i < kStateDim; ++i) r.fused_state.x[i] = next();
    Vector6 u;
    for (int i = 0; i < 6; ++i) u[i] = next();
    r.u = ControlInput::from_vector(u);
    Vector4 p;
    for (int i = 0; i < 4; ++i) p[i] = next();
    r.theta_hat = InertialParams::from_vector(p);
    for (int i = 0; i < 4; ++i) r.p_diag[i] = next();
    for (int i = 0; i < 4; ++i) p[i] = next();
    r.planner_theta = InertialParams::from_vector(p);
    r.gamma = next();
    r.cost_total = next();
    r.cost_tracking = next();
    r.cost_info = next();
    r.fim_trace = next();
    r.error_norm = next();
    const std::string_view it = cells[c++];
    const auto [ptr, ec] = std::from_chars(it.data(), it.data() + it.size(), r.iterations);
    if (ec != std::errc() || ptr != it.data() + it.size()) throw Error("bad iterations cell");
    r.plan_status = parse_status(cells[c++]);
    r.health = parse_health(cells[c++]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<EpisodeRow> read_episode_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_episode_csv(in);
}

void write_timing_csv(const std::filesystem::path& path, const EpisodeLog& log) {
  auto out = open_out(path);
  out << "t,solve_time_s,iterations,plan_status\n";
  for (const EpisodeRow& r : log.rows) {
    out << format_real(r.t) << ',' << format_real(r.solve_time) << ',' << r.iterations << ','
        << to_string(r.plan_status) << '\n';
  }
  check_written(out, path);
}

void write_belief_csv(const std::filesystem::path& path, const EpisodeLog& log) {
  auto out = open_out(path);
  out << "t";
  for (const char* prefix : {"est_", "pvar_"}) {
    for (const char* n : kParamNames) out << ',' << prefix << n;
  }
  out << ",health\n";
  for (const EpisodeRow& r : log.rows) {
    std::string line = format_real(r.t);
    put(line, r.theta_hat.as_vector());
    put(line, r.p_diag);
    out << line << ',' << health_name(r.health) << '\n';
  }
  check_written(out, path);
}

void write_plan_csv_header(std::ostream& out) {
  out << "tick,t,step,fx,fy,fz,tx,ty,tz";
  for (const char* n : kStateNames) out << ",pred_" << n;
  out << '\n';
}

void write_plan_csv_rows(std::ostream& out, std::size_t tick, double t, const HorizonPlan& plan) {
  for (std::size_t k = 0; k < plan.controls.size(); ++k) {
    std::string line = std::to_string(tick) + ',' + format_real(t) + ',' + std::to_string(k);
    put(line, plan.controls[k].as_vector());
    if (k < plan.predicted_states.size()) {
      put(line, plan.predicted_states[k].x);
    } else {
      for (int i = 0; i < kStateDim; ++i) line += ",nan";
    }
    out << line << '\n';
  }
}

std::string summary_json(const std::vector<EpisodeSummary>& summaries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const EpisodeSummary& s : summaries) {
    nlohmann::json j;
    j["name"] = s.name;
    j["ticks"] = s.ticks;
    j["reached_goal"] = s.reached_goal;
    j["arrival_time_s"] = s.arrival_time ? nlohmann::json(*s.arrival_time) : nlohmann::json();
    j["final_time_s"] = s.final_time;
    j["terminal_error"] = s.terminal_error;
    j["final_theta_hat"] = vec_json(s.final_theta_hat.as_vector());
    j["param_rel_error"] = vec_json(s.param_rel_error);
    j["param_std"] = vec_json(s.param_std);
    j["cov_trace"] = s.cov_trace;
    j["cov_trace_inertia"] = s.cov_trace_inertia;
    j["inertia_rel_error_norm"] = s.inertia_rel_error_norm;
    j["integrated_u_norm"] = s.integrated_u_norm;
    j["integrated_abs_torque"] = {s.integrated_abs_torque.x(), s.integrated_abs_torque.y(),
                                  s.integrated_abs_torque.z()};
    j["mean_solve_time_s"] = s.mean_solve_time;
    j["max_solve_time_s"] = s.max_solve_time;
    j["degraded_ticks"] = s.degraded_ticks;
    j["unhealthy_ticks"] = s.unhealthy_ticks;
    arr.push_back(std::move(j));
  }
  nlohmann::json root;
  root["episodes"] = std::move(arr);
  return root.dump(2) + "\n";
}

void write_summary_json(const std::filesystem::path& path,
                        const std::vector<EpisodeSummary>& summaries) {
  auto out = open_out(path);
  out << summary_json(summaries);
  check_written(out, path);
}

std::string summary_table(const std::vector<EpisodeSummary>& summaries) {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-24s %6s %8s %10s %11s %11s %11s %9s\n", "episode", "goal",
                "arrive_s", "term_err", "I_cov_tr", "I_rel_err", "mass_rel", "solve_ms");
  out += buf;
  for (const EpisodeSummary& s : summaries) {
    const std::string arrive =
        s.arrival_time ? format_real(*s.arrival_time) : std::string("-");
    std::snprintf(buf, sizeof buf, "%-24s %6s %8s %10.3e %11.3e %11.3e %11.3e %9.1f\n",
                  s.name.c_str(), s.reached_goal ? "yes" : "no", arrive.c_str(), s.terminal_error,
                  s.cov_trace_inertia, s.inertia_rel_error_norm, s.param_rel_error[0],
                  1e3 * s.mean_solve_time);
    out += buf;
  }
  return out;
}

}  // namespace infoplan
