#include "plflow/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "plflow/error.hpp"
#include "plflow/io.hpp"

namespace plflow {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 90, kRight = 20, kTop = 40, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v, const char* fmt = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void settle() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) {
      const double pad = std::max(1e-12, 0.05 * std::abs(lo));
      lo -= pad;
      hi += pad;
    }
  }
  double span() const { return hi - lo; }
};

std::vector<double> transform(const std::vector<double>& v, bool log_y) {
  if (!log_y) return v;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] > 0.0 ? std::log10(v[i]) : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace

std::string render_svg(const PlotSpec& plot) {
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  std::vector<std::vector<double>> ys;
  Range xr, yr;
  for (const auto& s : plot.series) {
    ys.push_back(transform(s.y, plot.log_y));
    for (std::size_t i = 0; i < s.x.size() && i < ys.back().size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(ys.back()[i])) {
        xr.add(s.x[i]);
        yr.add(ys.back()[i]);
      }
    }
  }
  xr.settle();
  yr.settle();
  if (plot.equal_aspect) {
    const double scale = std::max(xr.span() / pw, yr.span() / ph);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    xr.lo = cx - 0.5 * scale * pw, xr.hi = cx + 0.5 * scale * pw;
    yr.lo = cy - 0.5 * scale * ph, yr.hi = cy + 0.5 * scale * ph;
  }
  const auto px = [&](double x) { return kLeft + (x - xr.lo) / xr.span() * pw; };
  const auto py = [&](double y) { return kTop + ph - (y - yr.lo) / yr.span() * ph; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, "%.0f") + "\" height=\"" +
                    num(kHeight, "%.0f") + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + escape(plot.title) +
         "</text>\n";
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + xr.span() * i / 4.0, yv = yr.lo + yr.span() * i / 4.0;
    svg += "<line x1=\"" + num(px(xv)) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(px(xv)) + "\" y2=\"" +
           num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(kTop + ph + 20) + "\" text-anchor=\"middle\">" +
           num(xv, "%.4g") + "</text>\n";
    svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
           num(py(yv)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" + num(yv, "%.4g") +
           "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 15) + "\" text-anchor=\"middle\">" +
         escape(plot.x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num(kTop + ph / 2) + ")\">" + escape(plot.log_y ? "log10 " + plot.y_label : plot.y_label) + "</text>\n";

  for (std::size_t s = 0; s < plot.series.size(); ++s) {
    const auto& x = plot.series[s].x;
    const auto& y = ys[s];
    const char* colour = kPalette[s % std::size(kPalette)];
    std::string points;
    const auto flush = [&] {
      if (!points.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" +
               points + "\"/>\n";
      }
      points.clear();
    };
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
        flush();
        continue;
      }
      points += (points.empty() ? "" : " ") + num(px(x[i])) + "," + num(py(y[i]));
    }
    flush();
    if (plot.series.size() > 1 && !plot.series[s].label.empty()) {
      const double ly = kTop + 14 + 14 * static_cast<double>(s);
      svg += "<text x=\"" + num(kLeft + pw - 6) + "\" y=\"" + num(ly) + "\" text-anchor=\"end\" fill=\"" + colour +
             "\">" + escape(plot.series[s].label) + "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& trajectory_csv,
                                              const std::filesystem::path& out_dir) {
  const auto table = read_trajectory_csv(trajectory_csv);
  if (table.rows() == 0) throw Error(ErrorKind::MalformedTrajectory, trajectory_csv.string() + ": no records");
  const auto& t = table.column("t");
  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::string& file, const PlotSpec& plot) {
    const auto path = out_dir / file;
    write_text(path, render_svg(plot));
    written.push_back(path);
  };
  for (const char* column : kTrajectoryColumns) {
    if (std::string_view(column) == "t") continue;
    PlotSpec plot;
    plot.title = std::string(column) + " against t";
    plot.x_label = "t";
    plot.y_label = column;
    plot.series.push_back({column, t, table.column(column)});
    emit(std::string("plot_") + column + ".svg", plot);
  }
  PlotSpec energy;
  energy.title = "energy decay";
  energy.x_label = "t";
  energy.y_label = "E";
  energy.log_y = true;
  energy.series.push_back({"E", t, table.column("E")});
  emit("plot_log_E.svg", energy);

  const auto snaps = read_snapshot_index(trajectory_csv.parent_path() / "snapshots");
  if (!snaps.empty()) {
    PlotSpec overlay;
    overlay.title = "curve snapshots";
    overlay.x_label = "x";
    overlay.y_label = "y";
    overlay.equal_aspect = true;
    const std::size_t count = std::min<std::size_t>(10, snaps.size());
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = count == 1 ? 0 : i * (snaps.size() - 1) / (count - 1);
      const Curve c = read_curve_csv(snaps[j].path, 1.0);
      Series s;
      s.label = "t = " + num(snaps[j].t, "%.4g");
      for (const auto& p : c.nodes) {
        s.x.push_back(p.x);
        s.y.push_back(p.y);
      }
      overlay.series.push_back(std::move(s));
    }
    emit("plot_snapshots.svg", overlay);
  }
  return written;
}

}  // namespace plflow
