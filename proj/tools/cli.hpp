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
#ifndef INFOPLAN_TOOLS_CLI_HPP_
#define INFOPLAN_TOOLS_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace infoplan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

enum class Mode { kRun, kCompare, kSweep, kSelftest };

struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

struct RunManifest {
  Mode mode = Mode::kRun;
  std::vector<std::filesystem::path> scenarios;
  std::filesystem::path output_dir = "out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::vector<GridAxis> grid;
  unsigned jobs = 0;  // 0 = logical cores
  bool dump_plans = false;
};

// Thrown by parse_args. exit_code is 0 for --help, 2 for usage errors;
// what() carries the text to print.
class CliExit : public std::runtime_error {
 public:
  CliExit(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int exit_code() const { return code_; }

 private:
  int code_;
};

RunManifest parse_args(int argc, const char* const* argv);

// Runs the manifest, writing results under output_dir. Returns the exit code.
int execute(const RunManifest& manifest, std::ostream& out, std::ostream& err);

// Full front end: parse, configure logging from INFOPLAN_LOG_LEVEL, execute.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infoplan::cli

#endif  // INFOPLAN_TOOLS_CLI_HPP_
