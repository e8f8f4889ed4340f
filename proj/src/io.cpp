#include "plflow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "plflow/error.hpp"

namespace plflow {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fixed17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  std::string s = trim(std::string(text));
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_curve_csv(const Curve& curve, const std::filesystem::path& path) {
  std::string text = "index,x,y\n";
  for (std::size_t i = 0; i < curve.nodes.size(); ++i) {
    text += std::to_string(i) + "," + fixed17(curve.nodes[i].x) + "," + fixed17(curve.nodes[i].y) + "\n";
  }
  write_text(path, text);
}

Curve read_curve_csv(const std::filesystem::path& path, double gap) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || trim(line) != "index,x,y") {
    throw Error(ErrorKind::ParseError, path.string() + ": expected header index,x,y");
  }
  Curve c;
  c.boundary.gap = gap;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    const std::string where = path.string() + " line " + std::to_string(row);
    if (cells.size() != 3) throw Error(ErrorKind::ParseError, where + ": expected 3 fields");
    const double index = parse_double(cells[0], where + " index");
    if (index != static_cast<double>(c.nodes.size())) throw Error(ErrorKind::ParseError, where + ": index out of order");
    c.nodes.push_back({parse_double(cells[1], where + " x"), parse_double(cells[2], where + " y")});
  }
  return c;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string text;
  for (std::size_t c = 0; c < std::size(kTrajectoryColumns); ++c) {
    text += (c ? "," : "") + std::string(kTrajectoryColumns[c]);
  }
  text += "\n";
  for (const auto& r : traj.records) {
    const double cells[] = {r.t,    r.length, r.energy, r.kosc, r.omega_hat, r.kbar, r.ks_l2sq, r.kss_l2sq,
                            r.area, 0.0,      r.gamma_sup, r.kinf};
    for (std::size_t c = 0; c < std::size(cells); ++c) {
      if (c) text += ",";
      if (c == 9) {
        if (r.isoperimetric) text += fixed17(*r.isoperimetric);
      } else {
        text += fixed17(cells[c]);
      }
    }
    text += "\n";
  }
  return text;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  write_text(path, trajectory_csv(traj));
}

const std::vector<double>& TrajectoryTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) return values[c];
  }
  throw Error(ErrorKind::MalformedTrajectory, "missing column '" + std::string(name) + "'");
}

TrajectoryTable read_trajectory_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::MalformedTrajectory, path.string() + ": empty file");
  TrajectoryTable table;
  for (auto& h : split_csv(line)) table.columns.push_back(trim(h));
  for (const char* required : kTrajectoryColumns) {
    if (std::find(table.columns.begin(), table.columns.end(), required) == table.columns.end()) {
      throw Error(ErrorKind::MalformedTrajectory, path.string() + ": missing column '" + required + "'");
    }
  }
  table.values.assign(table.columns.size(), {});
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != table.columns.size()) {
      throw Error(ErrorKind::MalformedTrajectory,
                  path.string() + " line " + std::to_string(row) + ": expected " +
                      std::to_string(table.columns.size()) + " fields, got " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      try {
        table.values[c].push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN()
                                               : parse_double(cell, table.columns[c]));
      } catch (const Error& e) {
        throw Error(ErrorKind::MalformedTrajectory, path.string() + " line " + std::to_string(row) + ": " + e.what());
      }
    }
  }
  return table;
}

void write_snapshots(const Trajectory& traj, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string index = "index,t,file\n";
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.csv", i);
    write_curve_csv(traj.snapshots[i].curve, dir / name);
    index += std::to_string(i) + "," + fixed17(traj.snapshots[i].t) + "," + name + "\n";
  }
  write_text(dir / "index.csv", index);
}

std::vector<SnapshotFile> read_snapshot_index(const std::filesystem::path& dir) {
  std::vector<SnapshotFile> out;
  if (!std::filesystem::exists(dir / "index.csv")) return out;
  std::istringstream in(read_text(dir / "index.csv"));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw Error(ErrorKind::ParseError, (dir / "index.csv").string() + ": expected 3 fields");
    out.push_back({parse_double(cells[1], "snapshot time"), dir / trim(cells[2])});
  }
  return out;
}

}  // namespace plflow
