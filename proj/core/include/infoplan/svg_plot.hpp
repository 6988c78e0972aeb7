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
#ifndef INFOPLAN_SVG_PLOT_HPP_
#define INFOPLAN_SVG_PLOT_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "infoplan/closed_loop.hpp"

namespace infoplan {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

// Shaded region between lo and hi.
struct PlotBand {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string color = "#1f77b4";
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<PlotBand> bands;
  bool log_y = false;
};

// Panels are laid out in a grid of the given column count.
std::string render_svg(const std::vector<PlotPanel>& panels, int columns = 1,
                       double panel_width = 480.0, double panel_height = 260.0);

// Two-sigma interval of parameter i in a row; the belief is Gaussian in
// log space so the band is exp(log_mean +- 2 sqrt(P_ii)).
std::pair<double, double> parameter_band(const EpisodeRow& row, int i);

// Writes trajectory.svg, parameters.svg, error_norm.svg and gamma.svg into
// outdir and returns their paths.
std::vector<std::filesystem::path> emit_plots(const EpisodeLog& log,
                                              const std::filesystem::path& outdir);

}  // namespace infoplan

#endif  // INFOPLAN_SVG_PLOT_HPP_
