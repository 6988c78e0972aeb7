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
#include "infoplan/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "infoplan/error.hpp"

namespace infoplan {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
      const double pad = std::max(1.0, std::abs(hi)) * 0.5;
      lo -= pad;
      hi += pad;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }
};

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

void render_panel(std::string& out, const PlotPanel& p, double ox, double oy, double w,
                  double h) {
  const double ml = 62, mr = 12, mt = 26, mb = 40;
  const double pw = w - ml - mr, ph = h - mt - mb;
  auto ty = [&](double v) { return p.log_y ? std::log10(std::max(v, 1e-300)) : v; };

  Range xr, yr;
  for (const auto& s : p.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(ty(v));
  }
  for (const auto& b : p.bands) {
    for (double v : b.x) xr.add(v);
    for (double v : b.lo) yr.add(ty(v));
    for (double v : b.hi) yr.add(ty(v));
  }
  xr.finish();
  yr.finish();
  auto sx = [&](double v) { return ox + ml + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double v) { return oy + mt + ph - (ty(v) - yr.lo) / (yr.hi - yr.lo) * ph; };

  out += "<g>\n";
  out += "<text x=\"" + num(ox + w / 2) + "\" y=\"" + num(oy + 16) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape(p.title) + "</text>\n";
  out += "<rect x=\"" + num(ox + ml) + "\" y=\"" + num(oy + mt) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";

  const double xs = nice_step(xr.hi - xr.lo);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi; v += xs) {
    out += "<line x1=\"" + num(sx(v)) + "\" y1=\"" + num(oy + mt + ph) + "\" x2=\"" +
           num(sx(v)) + "\" y2=\"" + num(oy + mt + ph + 4) + "\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + num(sx(v)) + "\" y=\"" + num(oy + mt + ph + 16) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + tick_label(v) + "</text>\n";
  }
  const double ys = nice_step(yr.hi - yr.lo);
  for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi; v += ys) {
    const double y = oy + mt + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph;
    out += "<line x1=\"" + num(ox + ml - 4) + "\" y1=\"" + num(y) + "\" x2=\"" + num(ox + ml) +
           "\" y2=\"" + num(y) + "\" stroke=\"#444\"/>\n";
    const std::string label = p.log_y ? "1e" + tick_label(v) : tick_label(v);
    out += "<text x=\"" + num(ox + ml - 6) + "\" y=\"" + num(y + 3) +
           "\" text-anchor=\"end\" font-size=\"10\">" + label + "</text>\n";
  }
  out += "<text x=\"" + num(ox + ml + pw / 2) + "\" y=\"" + num(oy + h - 6) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + escape(p.x_label) + "</text>\n";
  out += "<text transform=\"translate(" + num(ox + 12) + "," + num(oy + mt + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-size=\"11\">" + escape(p.y_label) +
         "</text>\n";

  for (const auto& b : p.bands) {
    std::string pts;
    const std::size_t n = std::min({b.x.size(), b.lo.size(), b.hi.size()});
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isfinite(b.x[i]) && std::isfinite(b.hi[i])) {
        pts += num(sx(b.x[i])) + "," + num(sy(b.hi[i])) + " ";
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      if (std::isfinite(b.x[i]) && std::isfinite(b.lo[i])) {
        pts += num(sx(b.x[i])) + "," + num(sy(b.lo[i])) + " ";
      }
    }
    if (!pts.empty()) {
      out += "<polygon points=\"" + pts + "\" fill=\"" + b.color +
             "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    }
  }

  double legend_y = oy + mt + 12;
  for (const auto& s : p.series) {
    std::string d;
    bool pen_down = false;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        pen_down = false;
        continue;
      }
      d += (pen_down ? "L" : "M") + num(sx(s.x[i])) + " " + num(sy(s.y[i])) + " ";
      pen_down = true;
    }
    if (!d.empty()) {
      out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + s.color +
             "\" stroke-width=\"1.5\"" + (s.dashed ? " stroke-dasharray=\"5,3\"" : "") + "/>\n";
    }
    if (!s.label.empty()) {
      out += "<text x=\"" + num(ox + ml + pw - 6) + "\" y=\"" + num(legend_y) +
             "\" text-anchor=\"end\" font-size=\"10\" fill=\"" + s.color + "\">" +
             escape(s.label) + "</text>\n";
      legend_y += 12;
    }
  }
  out += "</g>\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

std::string render_svg(const std::vector<PlotPanel>& panels, int columns, double panel_width,
                       double panel_height) {
  columns = std::max(1, columns);
  const int rows = (static_cast<int>(panels.size()) + columns - 1) / columns;
  const double width = columns * panel_width;
  const double height = std::max(1, rows) * panel_height;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
         "\" font-family=\"sans-serif\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const double ox = static_cast<double>(i % columns) * panel_width;
    const double oy = static_cast<double>(i / columns) * panel_height;
    render_panel(out, panels[i], ox, oy, panel_width, panel_height);
  }
  out += "</svg>\n";
  return out;
}

std::pair<double, double> parameter_band(const EpisodeRow& row, int i) {
  const double mean = std::log(row.theta_hat.as_vector()[i]);
  const double s = std::sqrt(std::max(row.p_diag[i], 0.0));
  return {std::exp(mean - 2.0 * s), std::exp(mean + 2.0 * s)};
}

std::vector<std::filesystem::path> emit_plots(const EpisodeLog& log,
                                              const std::filesystem::path& outdir) {
  if (log.rows.empty()) throw InvalidArgument("emit_plots: episode log is empty");
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error("cannot create " + outdir.string() + ": " + ec.message());

  std::vector<double> t, rx, ry, rz, err, gamma;
  for (const EpisodeRow& r : log.rows) {
    t.push_back(r.t);
    rx.push_back(r.true_state.x[idx::kPos]);
    ry.push_back(r.true_state.x[idx::kPos + 1]);
    rz.push_back(r.true_state.x[idx::kPos + 2]);
    err.push_back(r.error_norm);
    gamma.push_back(r.gamma);
  }
  // Close the trajectory with the state the episode ended in.
  const double t_end = log.final_time;
  rx.push_back(log.final_true_state.x[idx::kPos]);
  ry.push_back(log.final_true_state.x[idx::kPos + 1]);
  rz.push_back(log.final_true_state.x[idx::kPos + 2]);
  std::vector<double> t_err = t;
  t_err.push_back(t_end);
  err.push_back(log.terminal_error);

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& file, const std::vector<PlotPanel>& panels, int cols) {
    const auto path = outdir / file;
    write_file(path, render_svg(panels, cols));
    written.push_back(path);
  };

  {
    PlotPanel xy{"Trajectory (x-y)", "x [m]", "y [m]", {{"path", rx, ry}}, {}, false};
    xy.series.push_back({"start", {rx.front()}, {ry.front()}, "#2ca02c"});
    PlotPanel xz{"Trajectory (x-z)", "x [m]", "z [m]", {{"path", rx, rz}}, {}, false};
    emit("trajectory.svg", {xy, xz}, 2);
  }
  {
    static const char* names[] = {"mass [kg]", "Ixx [kg m^2]", "Iyy [kg m^2]", "Izz [kg m^2]"};
    std::vector<PlotPanel> panels;
    for (int i = 0; i < kParamDim; ++i) {
      PlotBand band;
      std::vector<double> est;
      for (const EpisodeRow& r : log.rows) {
        const auto [lo, hi] = parameter_band(r, i);
        band.x.push_back(r.t);
        band.lo.push_back(lo);
        band.hi.push_back(hi);
        est.push_back(r.theta_hat.as_vector()[i]);
      }
      PlotPanel p{std::string("Estimate of ") + names[i], "t [s]", names[i], {}, {band}, false};
      p.series.push_back({"estimate +-2 sigma", t, est, "#1f77b4"});
      const double truth = log.true_params.as_vector()[i];
      if (std::isfinite(truth)) {
        p.series.push_back({"true", {t.front(), t.back()}, {truth, truth}, "#d62728", true});
      }
      panels.push_back(std::move(p));
    }
    emit("parameters.svg", panels, 2);
  }
  emit("error_norm.svg",
       {{"State error norm", "t [s]", "||e||", {{"", t_err, err, "#9467bd"}}, {}, false}}, 1);
  emit("gamma.svg",
       {{"Information weight gamma", "t [s]", "gamma", {{"", t, gamma, "#ff7f0e"}}, {}, false}},
       1);
  return written;
}

}  // namespace infoplan
