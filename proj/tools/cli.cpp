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
#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "infoplan/closed_loop.hpp"
#include "infoplan/reporting.hpp"
#include "infoplan/scenario.hpp"
#include "infoplan/selftest.hpp"
#include "infoplan/svg_plot.hpp"

namespace infoplan::cli {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void usage(const std::string& msg) { throw CliExit(kExitUsage, "error: " + msg + "\n"); }

void require_file(const fs::path& p) {
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) usage("scenario file not found: " + p.string());
}

bool known_key(const std::string& key) {
  for (const auto& k : scenario_keys()) {
    if (k.name == key) return true;
  }
  return false;
}

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) usage(std::string(flag) + " expects key=value, got '" + s + "'");
  std::string key = s.substr(0, eq);
  if (!known_key(key)) usage("unknown scenario key '" + key + "' in " + flag);
  return {std::move(key), s.substr(eq + 1)};
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_' || c == '=';
    out += ok ? c : '_';
  }
  return out;
}

ScenarioConfig prepare(const RunManifest& m, const fs::path& path) {
  ScenarioConfig cfg = load_scenario(path);
  for (const auto& o : m.overrides) apply_override(cfg, o);
  if (m.seed) cfg.seed = *m.seed;
  cfg.validate();
  for (const auto& [label, p] : {std::pair{"true", cfg.true_params}, std::pair{"guessed", cfg.initial_guess}}) {
    if (p.violates_triangle_inequality()) {
      spdlog::warn("{}: {} principal moments violate the triangle inequality", cfg.name, label);
    }
  }
  return cfg;
}

void write_manifest(const fs::path& dir, const RunManifest& m, const ScenarioConfig& cfg) {
  std::ofstream out(dir / "scenario.cfg");
  if (!out) throw Error("cannot write " + (dir / "scenario.cfg").string());
  out << "# Effective scenario, every key listed.\n";
  for (const auto& s : m.scenarios) out << "# source: " << s.string() << "\n";
  for (const auto& o : m.overrides) out << "# override: " << o << "\n";
  out << echo_scenario(cfg);
  if (!out.flush()) throw Error("write failed: " + (dir / "scenario.cfg").string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_episode(const fs::path& dir, const RunManifest& m, const ScenarioConfig& cfg,
                   const EpisodeLog& log) {
  make_dir(dir);
  write_manifest(dir, m, cfg);
  write_episode_csv(dir / "episode.csv", log);
  write_timing_csv(dir / "timing.csv", log);
  write_belief_csv(dir / "belief.csv", log);
  if (!log.rows.empty()) emit_plots(log, dir);
  spdlog::info("{}: {} ticks, goal {}, terminal error {:.3e} -> {}", log.name, log.rows.size(),
               log.reached_goal ? "reached" : "not reached", log.terminal_error, dir.string());
}

int run_mode(const RunManifest& m, std::ostream& out) {
  const ScenarioConfig cfg = prepare(m, m.scenarios.at(0));
  make_dir(m.output_dir);
  std::ofstream plans;
  PlanObserver observer;
  if (m.dump_plans) {
    plans.open(m.output_dir / "plans.csv");
    if (!plans) throw Error("cannot write " + (m.output_dir / "plans.csv").string());
    write_plan_csv_header(plans);
    observer = [&plans](std::size_t tick, double t, const HorizonPlan& plan) {
      write_plan_csv_rows(plans, tick, t, plan);
    };
  }
  spdlog::info("running {}", cfg.name);
  const EpisodeLog log = run_episode(cfg, observer);
  write_episode(m.output_dir, m, cfg, log);
  const std::vector<EpisodeSummary> s{summarize(log)};
  write_summary_json(m.output_dir / "summary.json", s);
  out << summary_table(s);
  return kExitOk;
}

int compare_mode(const RunManifest& m, std::ostream& out) {
  ScenarioConfig a = prepare(m, m.scenarios.at(0));
  ScenarioConfig b = prepare(m, m.scenarios.at(1));
  if (a.name == b.name) {
    a.name += "_a";
    b.name += "_b";
  }
  spdlog::info("comparing {} and {}", a.name, b.name);
  const ComparisonReport r = run_comparison(a, b);
  make_dir(m.output_dir);
  write_episode(m.output_dir / sanitize(a.name), m, a, r.log_a);
  write_episode(m.output_dir / sanitize(b.name), m, b, r.log_b);
  const std::vector<EpisodeSummary> s{r.a, r.b};
  write_summary_json(m.output_dir / "summary.json", s);
  out << summary_table(s);
  return kExitOk;
}

int sweep_mode(const RunManifest& m, std::ostream& out) {
  const ScenarioConfig base = prepare(m, m.scenarios.at(0));
  std::vector<ScenarioConfig> cfgs{base};
  for (const GridAxis& axis : m.grid) {
    std::vector<ScenarioConfig> next;
    for (const ScenarioConfig& c : cfgs) {
      for (const std::string& v : axis.values) {
        ScenarioConfig n = c;
        set_value(n, axis.key, v);
        n.name += "__" + axis.key + "=" + v;
        n.validate();
        next.push_back(std::move(n));
      }
    }
    cfgs = std::move(next);
  }
  spdlog::info("sweeping {} configurations on {} workers", cfgs.size(), m.jobs);
  const std::vector<EpisodeLog> logs = run_batch(cfgs, m.jobs);
  make_dir(m.output_dir);
  std::vector<EpisodeSummary> s;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%03zu_", i);
    write_episode(m.output_dir / (prefix + sanitize(cfgs[i].name)), m, cfgs[i], logs[i]);
    s.push_back(summarize(logs[i]));
  }
  write_summary_json(m.output_dir / "summary.json", s);
  out << summary_table(s);
  return kExitOk;
}

void configure_logging(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("infoplan", sink);
  logger->set_pattern("[%l] %v");
  const char* env = std::getenv("INFOPLAN_LOG_LEVEL");
  logger->set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
  spdlog::set_default_logger(logger);
}

}  // namespace

RunManifest parse_args(int argc, const char* const* argv) {
  CLI::App app{"Information-weighted receding-horizon planning for a rigid body with uncertain "
               "mass and inertia.",
               "infoplan"};
  app.require_subcommand(1);
  app.footer("Environment: INFOPLAN_LOG_LEVEL = trace|debug|info|warn|err|off (default info).\n"
             "Exit codes: 0 success, 1 runtime failure, 2 usage error.");

  RunManifest m;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::vector<std::string> grid;
  std::vector<std::string> files;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the scenario seed");
    sub->add_option("--set", m.overrides, "override a scenario key, key=value (repeatable)");
  };

  CLI::App* run = app.add_subcommand("run", "run one episode");
  run->add_option("scenario", files, "scenario file")->required()->expected(1);
  run->add_flag("--dump-plans", m.dump_plans, "write every horizon plan to plans.csv");
  common(run);

  CLI::App* compare = app.add_subcommand("compare", "run two episodes side by side");
  compare->add_option("scenarios", files, "two scenario files")->required()->expected(2);
  common(compare);

  CLI::App* sweep = app.add_subcommand("sweep", "run a grid of episodes");
  sweep->add_option("scenario", files, "base scenario file")->required()->expected(1);
  sweep->add_option("--grid", grid, "key=v1,v2,... (repeatable; cartesian product)")->required();
  sweep->add_option("--jobs", m.jobs, "worker threads (0 = logical cores)")->capture_default_str();
  common(sweep);

  app.add_subcommand("selftest", "run the fast property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    const int code = app.exit(e, os, os);
    throw CliExit(code == 0 ? kExitOk : kExitUsage, os.str());
  }

  if (run->parsed()) m.mode = Mode::kRun;
  else if (compare->parsed()) m.mode = Mode::kCompare;
  else if (sweep->parsed()) m.mode = Mode::kSweep;
  else m.mode = Mode::kSelftest;

  for (const auto& f : files) {
    require_file(f);
    m.scenarios.emplace_back(f);
  }
  m.output_dir = out_dir;
  bool seed_given = false;
  for (CLI::App* sub : {run, compare, sweep}) seed_given = seed_given || (sub->parsed() && sub->count("--seed") > 0);
  if (seed_given) m.seed = seed;
  for (const auto& o : m.overrides) split_assignment(o, "--set");
  for (const auto& g : grid) {
    auto [key, values] = split_assignment(g, "--grid");
    GridAxis axis{key, split_top_level(values)};
    for (const auto& v : axis.values) {
      if (v.empty()) usage("empty value in --grid " + g);
    }
    m.grid.push_back(std::move(axis));
  }
  return m;
}

int execute(const RunManifest& m, std::ostream& out, std::ostream& err) {
  try {
    switch (m.mode) {
      case Mode::kRun: return run_mode(m, out);
      case Mode::kCompare: return compare_mode(m, out);
      case Mode::kSweep: return sweep_mode(m, out);
      case Mode::kSelftest: {
        const SelftestReport r = selftest();
        out << r.format();
        return r.all_passed() ? kExitOk : kExitFailure;
      }
    }
  } catch (const InvalidArgument& e) {
    // Bad scenario content or overrides are the caller's input.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging(err);
  RunManifest m;
  try {
    m = parse_args(argc, argv);
  } catch (const CliExit& e) {
    (e.exit_code() == kExitOk ? out : err) << e.what();
    return e.exit_code();
  }
  return execute(m, out, err);
}

}  // namespace infoplan::cli
