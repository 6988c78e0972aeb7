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
#ifndef INFOPLAN_SCENARIO_HPP_
#define INFOPLAN_SCENARIO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "infoplan/closed_loop.hpp"
#include "infoplan/error.hpp"

namespace infoplan {

// Scenario files are flat "key = value" lines. Values are numbers, true /
// false, "quoted strings" or [comma, separated] lists of numbers or
// booleans. '#' starts a comment. Unknown and repeated keys are errors;
// omitted keys keep the ScenarioConfig default. Units are part of the key
// name (duration_max_s, true_mass_kg, ...).
class ScenarioError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct ScenarioKey {
  std::string name;
  std::string help;
};

// Every recognised key in echo order.
const std::vector<ScenarioKey>& scenario_keys();

ScenarioConfig parse_scenario(std::string_view text, const std::string& origin = "<string>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Applies one value given in file syntax, e.g. set_value(cfg, "seed", "7").
void set_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);
// Applies "key=value".
void apply_override(ScenarioConfig& cfg, std::string_view assignment);

// Every key with its current value, in a form parse_scenario reads back to
// an identical configuration.
std::string echo_scenario(const ScenarioConfig& cfg);

// Splits "v1,v2,[a,b]" at top-level commas.
std::vector<std::string> split_top_level(std::string_view list);

}  // namespace infoplan

#endif  // INFOPLAN_SCENARIO_HPP_
