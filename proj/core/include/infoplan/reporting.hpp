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
#ifndef INFOPLAN_REPORTING_HPP_
#define INFOPLAN_REPORTING_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "infoplan/closed_loop.hpp"

namespace infoplan {

// Episode CSV, one row per control tick, columns in this order:
//
//   t
//   true_rx true_ry true_rz true_qx true_qy true_qz true_qw
//   true_vx true_vy true_vz true_wx true_wy true_wz
//   fused_* (same 13 columns)
//   fx fy fz tx ty tz
//   est_mass est_ixx est_iyy est_izz          belief mean after the tick
//   pvar_mass pvar_ixx pvar_iyy pvar_izz      diag(P) of log(theta)
//   plan_mass plan_ixx plan_iyy plan_izz      parameters the planner used
//   gamma cost_total cost_tracking cost_info fim_trace error_norm
//   iterations plan_status health
//
// Reals are written in shortest round-trip form, so reading the file back
// reproduces every field bit for bit. Solve time is wall-clock and would
// break reproducibility, so it lives in the separate timing CSV instead.
const std::vector<std::string>& episode_csv_columns();
void write_episode_csv(std::ostream& out, const EpisodeLog& log);
void write_episode_csv(const std::filesystem::path& path, const EpisodeLog& log);
// Rows come back with solve_time = 0.
std::vector<EpisodeRow> read_episode_csv(std::istream& in);
std::vector<EpisodeRow> read_episode_csv(const std::filesystem::path& path);

// t, solve_time_s, iterations, plan_status.
void write_timing_csv(const std::filesystem::path& path, const EpisodeLog& log);

// t, est_*, pvar_*, health.
void write_belief_csv(const std::filesystem::path& path, const EpisodeLog& log);

// One row per planned step: tick, t, step, six inputs, 13 predicted state
// values at the start of that step.
void write_plan_csv_header(std::ostream& out);
void write_plan_csv_rows(std::ostream& out, std::size_t tick, double t, const HorizonPlan& plan);

std::string summary_json(const std::vector<EpisodeSummary>& summaries);
void write_summary_json(const std::filesystem::path& path,
                        const std::vector<EpisodeSummary>& summaries);

// Fixed-width console table.
std::string summary_table(const std::vector<EpisodeSummary>& summaries);

// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

}  // namespace infoplan

#endif  // INFOPLAN_REPORTING_HPP_
