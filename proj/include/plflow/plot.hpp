#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace plflow {

struct Series {
  std::string label;
  std::vector<double> x, y;  ///< NaN entries break the line
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  bool equal_aspect = false;
  std::vector<Series> series;
};

/// Standalone SVG line plot; byte-identical for identical input.
std::string render_svg(const PlotSpec& plot);

/// One plot per trajectory column against t, log10 E against t and, when a
/// snapshots/ directory sits next to the trajectory file, an overlay of up to
/// ten snapshots. Returns the written files in order. Throws MalformedTrajectory.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& trajectory_csv,
                                              const std::filesystem::path& out_dir);

}  // namespace plflow
