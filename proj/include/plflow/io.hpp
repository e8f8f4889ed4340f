#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "plflow/flow.hpp"

namespace plflow {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Strict parse of a whole field; throws ParseError naming `what`.
double parse_double(std::string_view text, std::string_view what);

/// `index,x,y`, 17 significant digits.
void write_curve_csv(const Curve& curve, const std::filesystem::path& path);
Curve read_curve_csv(const std::filesystem::path& path, double gap);

inline constexpr const char* kTrajectoryColumns[] = {"t",       "L",        "E",    "Kosc",   "omega_hat", "kbar",
                                                     "ks_l2sq", "kss_l2sq", "area", "isoper", "gamma_sup", "kinf"};

/// One row per record; an undefined isoperimetric ratio is left empty.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
std::string trajectory_csv(const Trajectory& traj);

/// Parsed trajectory columns keyed by header name.
struct TrajectoryTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  ///< values[c][row]; NaN for empty cells

  const std::vector<double>& column(std::string_view name) const;
  std::size_t rows() const { return values.empty() ? 0 : values.front().size(); }
};

/// Throws MalformedTrajectory naming the first missing column or bad row.
TrajectoryTable read_trajectory_csv(const std::filesystem::path& path);

/// snapshots/index.csv (`index,t,file`) plus one curve CSV per snapshot.
void write_snapshots(const Trajectory& traj, const std::filesystem::path& dir);

struct SnapshotFile {
  double t = 0.0;
  std::filesystem::path path;
};

std::vector<SnapshotFile> read_snapshot_index(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace plflow
