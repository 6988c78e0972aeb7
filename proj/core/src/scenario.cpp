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
#include "infoplan/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace infoplan {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

struct Value {
  enum class Kind { kNumber, kBool, kString, kWord, kList };
  Kind kind = Kind::kWord;
  std::string text;          // scalar source text or string contents
  bool boolean = false;
  std::vector<double> list;  // booleans stored as 0 / 1
  bool list_has_bool = false;
};

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

Value parse_scalar(std::string_view s) {
  Value v;
  v.text = std::string(s);
  double d = 0.0;
  if (s == "true" || s == "false") {
    v.kind = Value::Kind::kBool;
    v.boolean = s == "true";
  } else if (parse_double(s, d)) {
    v.kind = Value::Kind::kNumber;
  } else {
    v.kind = Value::Kind::kWord;
  }
  return v;
}

Value parse_value(std::string_view raw) {
  const std::string_view s = trim(raw);
  if (s.empty()) throw ScenarioError("missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') throw ScenarioError("unterminated string");
    const std::string_view body = s.substr(1, s.size() - 2);
    if (body.find('"') != std::string_view::npos) throw ScenarioError("stray quote in string");
    Value v;
    v.kind = Value::Kind::kString;
    v.text = std::string(body);
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') throw ScenarioError("unterminated list");
    Value v;
    v.kind = Value::Kind::kList;
    const std::string_view body = trim(s.substr(1, s.size() - 2));
    if (body.empty()) return v;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = body.find(',', start);
      const std::string_view item =
          trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                   : comma - start));
      const Value e = parse_scalar(item);
      if (e.kind == Value::Kind::kNumber) {
        double d = 0.0;
        parse_double(item, d);
        v.list.push_back(d);
      } else if (e.kind == Value::Kind::kBool) {
        v.list.push_back(e.boolean ? 1.0 : 0.0);
        v.list_has_bool = true;
      } else {
        throw ScenarioError("list items must be numbers or booleans, got '" +
                            std::string(item) + "'");
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return v;
  }
  return parse_scalar(s);
}

std::string fmt_double(double d) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, p);
  // Keep a decimal marker so the echo reads as a real number.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

double as_double(const Value& v) {
  double d = 0.0;
  if (v.kind != Value::Kind::kNumber || !parse_double(v.text, d)) {
    throw ScenarioError("expected a number, got '" + v.text + "'");
  }
  return d;
}

template <class Int>
Int as_integer(const Value& v) {
  Int out{};
  const std::string& t = v.text;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (v.kind != Value::Kind::kNumber || ec != std::errc() || p != t.data() + t.size()) {
    throw ScenarioError("expected an integer, got '" + t + "'");
  }
  return out;
}

bool as_bool(const Value& v) {
  if (v.kind != Value::Kind::kBool) throw ScenarioError("expected true or false, got '" + v.text + "'");
  return v.boolean;
}

std::string as_text(const Value& v) {
  if (v.kind != Value::Kind::kString && v.kind != Value::Kind::kWord) {
    throw ScenarioError("expected a string");
  }
  return v.text;
}

const std::vector<double>& as_list(const Value& v, std::size_t n) {
  if (v.kind != Value::Kind::kList) throw ScenarioError("expected a list");
  if (v.list.size() != n) {
    throw ScenarioError("expected " + std::to_string(n) + " items, got " +
                        std::to_string(v.list.size()));
  }
  if (v.list_has_bool) throw ScenarioError("expected numbers in list");
  return v.list;
}

struct Binding {
  ScenarioKey key;
  std::function<void(ScenarioConfig&, const Value&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

ScenarioConfig& mut(const ScenarioConfig& c) { return const_cast<ScenarioConfig&>(c); }

template <class F>
Binding real(std::string name, std::string help, F ref) {
  return {{std::move(name), std::move(help)},
          [ref](ScenarioConfig& c, const Value& v) { ref(c) = as_double(v); },
          [ref](const ScenarioConfig& c) { return fmt_double(ref(mut(c))); }};
}

template <class Int, class F>
Binding integer(std::string name, std::string help, F ref) {
  return {{std::move(name), std::move(help)},
          [ref](ScenarioConfig& c, const Value& v) { ref(c) = as_integer<Int>(v); },
          [ref](const ScenarioConfig& c) { return std::to_string(ref(mut(c))); }};
}

template <class F>
Binding boolean(std::string name, std::string help, F ref) {
  return {{std::move(name), std::move(help)},
          [ref](ScenarioConfig& c, const Value& v) { ref(c) = as_bool(v); },
          [ref](const ScenarioConfig& c) { return std::string(ref(mut(c)) ? "true" : "false"); }};
}

std::string fmt_list(const auto& vec, int n) {
  std::string s = "[";
  for (int i = 0; i < n; ++i) {
    if (i) s += ", ";
    s += fmt_double(vec[i]);
  }
  return s + "]";
}

template <int N, class F>
Binding vec(std::string name, std::string help, F ref) {
  return {{std::move(name), std::move(help)},
          [ref](ScenarioConfig& c, const Value& v) {
            const auto& l = as_list(v, N);
            auto&& target = ref(c);
            for (int i = 0; i < N; ++i) target[i] = l[i];
          },
          [ref](const ScenarioConfig& c) {
            auto&& source = ref(mut(c));
            return fmt_list(source, N);
          }};
}

template <int N, class F>
Binding diagonal(std::string name, std::string help, F ref) {
  return {{std::move(name), std::move(help)},
          [ref](ScenarioConfig& c, const Value& v) {
            const auto& l = as_list(v, N);
            auto& m = ref(c);
            m.setZero();
            for (int i = 0; i < N; ++i) m(i, i) = l[i];
          },
          [ref](const ScenarioConfig& c) {
            const auto& m = ref(mut(c));
            if (!m.isDiagonal(0.0)) {
              throw ScenarioError("weight matrix is not diagonal and cannot be echoed");
            }
            return fmt_list(m.diagonal(), N);
          }};
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = [] {
    using C = ScenarioConfig;
    std::vector<Binding> t;
    t.push_back({{"name", "scenario label"},
                 [](C& c, const Value& v) { c.name = as_text(v); },
                 [](const C& c) { return "\"" + c.name + "\""; }});
    t.push_back(integer<std::uint64_t>("seed", "seed for plant noise",
                                       [](C& c) -> auto& { return c.seed; }));
    t.push_back(real("duration_max_s", "episode cap", [](C& c) -> auto& { return c.duration_max; }));
    t.push_back(real("control_rate_hz", "replanning rate",
                     [](C& c) -> auto& { return c.control_rate; }));
    t.push_back(integer<int>("plant_substeps", "RK4 substeps per plant interval",
                             [](C& c) -> auto& { return c.plant_substeps; }));
    t.push_back(integer<int>("goal_ticks", "consecutive ticks inside the goal region",
                             [](C& c) -> auto& { return c.goal_ticks; }));
    t.push_back(real("goal_tolerance", "goal radius in combined error norm",
                     [](C& c) -> auto& { return c.goal.tolerance; }));
    t.push_back(real("fusion_noise_std", "std of fused-state error (0 = exact)",
                     [](C& c) -> auto& { return c.fusion_noise_std; }));
    t.push_back(real("fim_forgetting", "scale on the historical FIM seed",
                     [](C& c) -> auto& { return c.fim_forgetting; }));

    t.push_back(real("true_mass_kg", "plant mass", [](C& c) -> auto& { return c.true_params.mass; }));
    t.push_back(real("true_ixx_kgm2", "plant Ixx", [](C& c) -> auto& { return c.true_params.ixx; }));
    t.push_back(real("true_iyy_kgm2", "plant Iyy", [](C& c) -> auto& { return c.true_params.iyy; }));
    t.push_back(real("true_izz_kgm2", "plant Izz", [](C& c) -> auto& { return c.true_params.izz; }));
    t.push_back(real("guess_mass_kg", "initial mass estimate",
                     [](C& c) -> auto& { return c.initial_guess.mass; }));
    t.push_back(real("guess_ixx_kgm2", "initial Ixx estimate",
                     [](C& c) -> auto& { return c.initial_guess.ixx; }));
    t.push_back(real("guess_iyy_kgm2", "initial Iyy estimate",
                     [](C& c) -> auto& { return c.initial_guess.iyy; }));
    t.push_back(real("guess_izz_kgm2", "initial Izz estimate",
                     [](C& c) -> auto& { return c.initial_guess.izz; }));
    t.push_back(vec<4>("prior_log_std", "prior std of log(m, Ixx, Iyy, Izz)",
                       [](C& c) -> auto& { return c.prior_log_std; }));

    t.push_back(vec<3>("x0_position_m", "initial position", [](C& c) { return c.x0.r(); }));
    t.push_back(vec<4>("x0_quat_xyzw", "initial attitude", [](C& c) { return c.x0.q(); }));
    t.push_back(vec<3>("x0_velocity_mps", "initial velocity", [](C& c) { return c.x0.v(); }));
    t.push_back(vec<3>("x0_omega_radps", "initial body rate", [](C& c) { return c.x0.w(); }));
    t.push_back(vec<3>("goal_position_m", "goal position", [](C& c) { return c.goal.target.r(); }));
    t.push_back(vec<4>("goal_quat_xyzw", "goal attitude", [](C& c) { return c.goal.target.q(); }));
    t.push_back(vec<3>("goal_velocity_mps", "goal velocity",
                       [](C& c) { return c.goal.target.v(); }));
    t.push_back(vec<3>("goal_omega_radps", "goal body rate",
                       [](C& c) { return c.goal.target.w(); }));

    t.push_back(vec<6>("plant_meas_var", "plant measurement noise variance (v, w)",
                       [](C& c) -> auto& { return c.noise.measurement_var; }));
    t.push_back(vec<6>("plant_process_var", "plant velocity noise variance per interval",
                       [](C& c) -> auto& { return c.noise.process_var; }));

    t.push_back(diagonal<kErrorDim>("weight_error_diag", "diagonal of Q",
                                    [](C& c) -> auto& { return c.weights.q; }));
    t.push_back(diagonal<kControlDim>("weight_input_diag", "diagonal of R",
                                      [](C& c) -> auto& { return c.weights.r; }));
    t.push_back(real("fim_ridge", "ridge added before inverting the FIM",
                     [](C& c) -> auto& { return c.weights.ridge; }));
    t.push_back(real("gamma_tau_s", "decay constant of the information weight",
                     [](C& c) -> auto& { return c.weights.tau_decay; }));
    t.push_back({{"gamma_mode", "norm | squared_norm"},
                 [](C& c, const Value& v) {
                   const std::string s = as_text(v);
                   if (s == "norm") {
                     c.weights.gamma_mode = GammaMode::kNorm;
                   } else if (s == "squared_norm") {
                     c.weights.gamma_mode = GammaMode::kSquaredNorm;
                   } else {
                     throw ScenarioError("gamma_mode must be norm or squared_norm");
                   }
                 },
                 [](const C& c) {
                   return std::string(c.weights.gamma_mode == GammaMode::kNorm ? "\"norm\""
                                                                               : "\"squared_norm\"");
                 }});
    t.push_back({{"info_mask", "parameters the information cost targets (m, Ixx, Iyy, Izz)"},
                 [](C& c, const Value& v) {
                   if (v.kind != Value::Kind::kList || v.list.size() != kParamDim ||
                       (!v.list_has_bool && !v.list.empty())) {
                     throw ScenarioError("info_mask expects 4 booleans");
                   }
                   for (int i = 0; i < kParamDim; ++i) c.weights.info_mask[i] = v.list[i] != 0.0;
                 },
                 [](const C& c) {
                   std::string s = "[";
                   for (int i = 0; i < kParamDim; ++i) {
                     if (i) s += ", ";
                     s += c.weights.info_mask[i] ? "true" : "false";
                   }
                   return s + "]";
                 }});
    t.push_back(vec<3>("force_min_n", "lower force bound (body axes)",
                       [](C& c) { return c.bounds.lower.head<3>(); }));
    t.push_back(vec<3>("force_max_n", "upper force bound",
                       [](C& c) { return c.bounds.upper.head<3>(); }));
    t.push_back(vec<3>("torque_min_nm", "lower torque bound",
                       [](C& c) { return c.bounds.lower.tail<3>(); }));
    t.push_back(vec<3>("torque_max_nm", "upper torque bound",
                       [](C& c) { return c.bounds.upper.tail<3>(); }));

    t.push_back(integer<int>("horizon", "planning horizon length",
                             [](C& c) -> auto& { return c.planner.horizon; }));
    t.push_back(real("planner_dt_s", "planner interval",
                     [](C& c) -> auto& { return c.planner.dt; }));
    t.push_back(integer<int>("planner_substeps", "RK4 substeps per planner interval",
                             [](C& c) -> auto& { return c.planner.substeps; }));
    t.push_back(integer<int>("max_iterations", "optimizer iteration cap",
                             [](C& c) -> auto& { return c.planner.max_iterations; }));
    t.push_back(real("grad_tolerance", "projected gradient stop",
                     [](C& c) -> auto& { return c.planner.grad_tolerance; }));
    t.push_back(real("rel_cost_tolerance", "relative cost decrease stop",
                     [](C& c) -> auto& { return c.planner.rel_cost_tolerance; }));
    t.push_back(real("fd_relative_step", "finite-difference step factor",
                     [](C& c) -> auto& { return c.planner.fd_relative_step; }));
    t.push_back(real("momentum", "heavy-ball factor of the optimizer",
                     [](C& c) -> auto& { return c.planner.momentum; }));
    t.push_back({{"force_frame", "body | inertial"},
                 [](C& c, const Value& v) {
                   const std::string s = as_text(v);
                   ForceFrame f;
                   if (s == "body") {
                     f = ForceFrame::kBody;
                   } else if (s == "inertial") {
                     f = ForceFrame::kInertial;
                   } else {
                     throw ScenarioError("force_frame must be body or inertial");
                   }
                   c.planner.dynamics.force_frame = f;
                   c.ukf.dynamics.force_frame = f;
                 },
                 [](const C& c) {
                   return std::string(c.planner.dynamics.force_frame == ForceFrame::kBody
                                          ? "\"body\""
                                          : "\"inertial\"");
                 }});

    t.push_back(boolean("info_weighting", "include the information cost",
                        [](C& c) -> auto& { return c.flags.info_weighting; }));
    t.push_back(boolean("param_updates", "planner adopts estimator output",
                        [](C& c) -> auto& { return c.flags.param_updates; }));

    t.push_back(real("ukf_alpha", "sigma point spread", [](C& c) -> auto& { return c.ukf.alpha; }));
    t.push_back(real("ukf_beta", "prior distribution factor",
                     [](C& c) -> auto& { return c.ukf.beta; }));
    t.push_back(real("ukf_kappa", "secondary scaling", [](C& c) -> auto& { return c.ukf.kappa; }));
    t.push_back(vec<4>("ukf_q_theta", "log-parameter random walk variance",
                       [](C& c) -> auto& { return c.ukf.q_theta; }));
    t.push_back(vec<6>("ukf_meas_var", "measurement variance assumed by the filter and FIM",
                       [](C& c) -> auto& { return c.ukf.sigma_meas; }));
    t.push_back(integer<int>("ukf_substeps", "RK4 substeps of the measurement model",
                             [](C& c) -> auto& { return c.ukf.substeps; }));
    t.push_back(integer<int>("ukf_trace_increase_limit", "rising-trace updates before unhealthy",
                             [](C& c) -> auto& { return c.ukf.trace_increase_limit; }));
    t.push_back(real("ukf_innovation_sigma_limit", "normalized innovation alarm level",
                     [](C& c) -> auto& { return c.ukf.innovation_sigma_limit; }));
    t.push_back(integer<int>("ukf_innovation_repeat_limit", "alarming updates before unhealthy",
                             [](C& c) -> auto& { return c.ukf.innovation_repeat_limit; }));
    return t;
  }();
  return table;
}

const Binding& find_binding(std::string_view key) {
  static const std::unordered_map<std::string, const Binding*> index = [] {
    std::unordered_map<std::string, const Binding*> m;
    for (const Binding& b : bindings()) m.emplace(b.key.name, &b);
    return m;
  }();
  const auto it = index.find(std::string(key));
  if (it == index.end()) throw ScenarioError("unknown key '" + std::string(key) + "'");
  return *it->second;
}

void apply(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  const Binding& b = find_binding(key);
  try {
    b.set(cfg, parse_value(value));
  } catch (const ScenarioError& e) {
    throw ScenarioError(std::string(key) + ": " + e.what());
  }
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

const std::vector<ScenarioKey>& scenario_keys() {
  static const std::vector<ScenarioKey> keys = [] {
    std::vector<ScenarioKey> k;
    for (const Binding& b : bindings()) k.push_back(b.key);
    return k;
  }();
  return keys;
}

ScenarioConfig parse_scenario(std::string_view text, const std::string& origin) {
  ScenarioConfig cfg;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ScenarioError(where + "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (!seen.insert(key).second) throw ScenarioError(where + "duplicate key '" + key + "'");
    try {
      apply(cfg, key, line.substr(eq + 1));
    } catch (const ScenarioError& e) {
      throw ScenarioError(where + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ScenarioError(origin + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string());
}

void set_value(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  apply(cfg, trim(key), value);
}

void apply_override(ScenarioConfig& cfg, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ScenarioError("override '" + std::string(assignment) + "' is not key=value");
  }
  set_value(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string echo_scenario(const ScenarioConfig& cfg) {
  std::string out;
  for (const Binding& b : bindings()) {
    out += b.key.name + " = " + b.get(cfg) + "  # " + b.key.help + "\n";
  }
  return out;
}

std::vector<std::string> split_top_level(std::string_view list) {
  std::vector<std::string> out;
  int depth = 0;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= list.size(); ++i) {
    const char ch = i < list.size() ? list[i] : ',';
    if (ch == '"') quoted = !quoted;
    if (quoted) continue;
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      out.emplace_back(trim(list.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace infoplan
