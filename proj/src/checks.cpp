#include "plflow/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "plflow/curve.hpp"
#include "plflow/error.hpp"
#include "plflow/stencil.hpp"

namespace plflow {

namespace {

void require_records(const Trajectory& traj, std::size_t n, const char* what) {
  if (traj.records.size() < n) {
    throw Error(ErrorKind::InsufficientRecords,
                std::string(what) + " needs at least " + std::to_string(n) + " records, got " +
                    std::to_string(traj.records.size()));
  }
}

std::vector<double> column(const Trajectory& traj, std::string_view field) {
  std::vector<double> out;
  out.reserve(traj.records.size());
  for (const auto& r : traj.records) out.push_back(record_field(r, field));
  return out;
}

/// Second-order derivative at interior record i on a possibly nonuniform time grid.
double centred_rate(const std::vector<double>& t, const std::vector<double>& v, std::size_t i) {
  const ThreePoint w = first_derivative_3pt(t[i] - t[i - 1], t[i + 1] - t[i]);
  return w.minus * v[i - 1] + w.centre * v[i] + w.plus * v[i + 1];
}

double relative_residual(double lhs, double rhs, double scale) {
  const double diff = std::abs(lhs - rhs);
  if (diff == 0.0) return 0.0;
  if (!(scale > 0.0)) return std::numeric_limits<double>::infinity();
  return diff / scale;
}

void note(MonotonicityReport& rep, double value, double t) {
  if (value > rep.worst_violation || std::isnan(value)) {
    rep.worst_violation = value;
    rep.worst_time = t;
  }
  if ((value > rep.slack || std::isnan(value)) && !rep.first_violation_time) rep.first_violation_time = t;
}

void finish(MonotonicityReport& rep) { rep.verdict = rep.worst_violation <= rep.slack; }

MonotonicityReport start(std::string quantity, double slack) {
  MonotonicityReport rep;
  rep.quantity = std::move(quantity);
  rep.slack = slack;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace

bool is_record_field(std::string_view f) {
  static constexpr std::string_view names[] = {"t",    "L",       "E",        "Kosc", "omega_hat", "kbar",
                                               "ks_l2sq", "kss_l2sq", "area", "isoper",    "gamma_sup",
                                               "kinf"};
  return std::find(std::begin(names), std::end(names), f) != std::end(names);
}

double record_field(const DiagnosticsRecord& r, std::string_view f) {
  if (f == "t") return r.t;
  if (f == "L") return r.length;
  if (f == "E") return r.energy;
  if (f == "Kosc") return r.kosc;
  if (f == "omega_hat") return r.omega_hat;
  if (f == "kbar") return r.kbar;
  if (f == "ks_l2sq") return r.ks_l2sq;
  if (f == "kss_l2sq") return r.kss_l2sq;
  if (f == "area") return r.area;
  if (f == "isoper") return r.isoperimetric.value_or(std::numeric_limits<double>::quiet_NaN());
  if (f == "gamma_sup") return r.gamma_sup;
  if (f == "kinf") return r.kinf;
  throw Error(ErrorKind::InvalidArgument, "unknown record field '" + std::string(f) + "'");
}

MonotonicityReport check_non_increasing(const Trajectory& traj, std::string_view field, Slack slack,
                                        bool strict) {
  require_records(traj, 2, "monotonicity check");
  const bool length = field == "L";
  const auto v = column(traj, field);
  MonotonicityReport rep =
      start(std::string(field) + (strict ? " strictly decreasing" : " non-increasing"),
            slack.absolute + slack.relative * std::abs(v.front()));
  for (std::size_t i = 1; i < v.size(); ++i) {
    // Length differences come from the cancellation-free excess over the gap.
    const double inc = length ? traj.records[i].length_excess - traj.records[i - 1].length_excess : v[i] - v[i - 1];
    note(rep, inc, traj.records[i].t);
    if (strict && !(inc < 0.0) && !rep.first_violation_time) rep.first_violation_time = traj.records[i].t;
  }
  finish(rep);
  if (strict && !(rep.worst_violation < 0.0)) rep.verdict = false;
  return rep;
}

MonotonicityReport check_length_identity(const Trajectory& traj, std::size_t skip, double tolerance) {
  require_records(traj, 3, "length identity");
  std::vector<double> t, excess;
  for (const auto& r : traj.records) {
    t.push_back(r.t);
    excess.push_back(r.length_excess);
  }
  MonotonicityReport rep = start("dL/dt residual", tolerance);
  for (std::size_t i = std::max<std::size_t>(1, skip); i + 1 < t.size(); ++i) {
    const auto& r = traj.records[i];
    const double lhs = centred_rate(t, excess, i);
    const double rhs = traj.flow == FlowKind::CurveDiffusion ? -r.ks_l2sq : r.length_rate;
    note(rep, relative_residual(lhs, rhs, std::abs(rhs)), r.t);
  }
  if (rep.worst_violation == -std::numeric_limits<double>::infinity()) rep.worst_violation = 0.0;
  finish(rep);
  return rep;
}

WindingReport check_winding_and_kbar(const Trajectory& traj, double winding_tolerance, double kbar_tolerance,
                                     double kbar_zero_tolerance) {
  require_records(traj, 3, "winding check");
  const auto& recs = traj.records;
  const double gap = traj.boundary.gap;
  WindingReport out;
  out.winding = start("omega_hat drift", winding_tolerance);
  for (const auto& r : recs) note(out.winding, std::abs(r.omega_hat - recs.front().omega_hat), r.t);
  finish(out.winding);

  const double omega = recs.front().omega_hat;
  if (traj.flow == FlowKind::CurveDiffusion && std::abs(omega) >= 0.25) {
    std::vector<double> t, kbar;
    for (const auto& r : recs) {
      t.push_back(r.t);
      kbar.push_back(r.kbar);
    }
    out.kbar = start("dkbar/dt residual", kbar_tolerance);
    for (std::size_t i = 1; i + 1 < recs.size(); ++i) {
      const auto& r = recs[i];
      const double lhs = centred_rate(t, kbar, i);
      const double rhs = 2.0 * r.omega_hat * std::numbers::pi * r.ks_l2sq / (r.length * r.length);
      note(out.kbar, relative_residual(lhs, rhs, std::abs(rhs)), r.t);
    }
  } else if (std::abs(omega) < 0.25) {
    out.kbar = start("gap*|kbar|", kbar_zero_tolerance);
    for (const auto& r : recs) note(out.kbar, gap * std::abs(r.kbar), r.t);
  } else {
    out.kbar = start("gap*|kbar - kbar(0)|", std::numeric_limits<double>::infinity());
    for (const auto& r : recs) note(out.kbar, gap * std::abs(r.kbar - recs.front().kbar), r.t);
  }
  if (out.kbar.worst_violation == -std::numeric_limits<double>::infinity()) out.kbar.worst_violation = 0.0;
  finish(out.kbar);
  return out;
}

MonotonicityReport check_kosc_evolution(const Trajectory& traj, std::size_t skip, double tolerance) {
  if (traj.flow != FlowKind::CurveDiffusion) {
    throw Error(ErrorKind::InvalidArgument, "the K_osc evolution identity is stated for curve diffusion");
  }
  require_records(traj, 3, "K_osc evolution");
  if (traj.snapshots.size() != traj.records.size()) {
    throw Error(ErrorKind::MissingSnapshots, "K_osc evolution needs a snapshot at every record (" +
                                                 std::to_string(traj.snapshots.size()) + " snapshots, " +
                                                 std::to_string(traj.records.size()) + " records)");
  }
  std::vector<double> t, kosc;
  for (const auto& r : traj.records) {
    t.push_back(r.t);
    kosc.push_back(r.kosc);
  }
  MonotonicityReport rep = start("K_osc identity residual", tolerance);
  for (std::size_t i = std::max<std::size_t>(1, skip); i + 1 < t.size(); ++i) {
    if (traj.snapshots[i].t != t[i]) {
      throw Error(ErrorKind::MissingSnapshots, "snapshot times do not match record times");
    }
    const FrameField frame = compute_frame(traj.snapshots[i].curve);
    const auto w = trapezoid_weights(frame);
    const auto& r = traj.records[i];
    const double len = r.length, kbar = r.kbar;
    double quad = 0.0, lin = 0.0;
    for (std::size_t j = 0; j < frame.size(); ++j) {
      const double dk = frame.k[j] - kbar;
      const double ks2 = frame.ks[j] * frame.ks[j];
      quad += w[j] * dk * dk * ks2;
      lin += w[j] * dk * ks2;
    }
    const double lhs = centred_rate(t, kosc, i) + r.kosc * r.ks_l2sq / len + 2.0 * len * r.kss_l2sq;
    const double rhs = 3.0 * len * quad + 6.0 * kbar * len * lin + 2.0 * kbar * kbar * len * r.ks_l2sq;
    note(rep, relative_residual(lhs, rhs, 2.0 * len * r.kss_l2sq), r.t);
  }
  if (rep.worst_violation == -std::numeric_limits<double>::infinity()) rep.worst_violation = 0.0;
  finish(rep);
  return rep;
}

MonotonicityReport check_time_integral_bound(const Trajectory& traj) {
  require_records(traj, 2, "time-integral bound");
  const auto& recs = traj.records;
  const double l0 = recs.front().length;
  MonotonicityReport rep = start("int K_osc dt", l0 * l0 * l0 * l0 / (4.0 * std::numbers::pi * std::numbers::pi));
  double integral = 0.0;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    integral += 0.5 * (recs[i].kosc + recs[i - 1].kosc) * (recs[i].t - recs[i - 1].t);
  }
  rep.worst_violation = integral;
  rep.worst_time = recs.back().t;
  rep.verdict = integral < rep.slack;
  if (!rep.verdict) rep.first_violation_time = recs.back().t;
  return rep;
}

MonotonicityReport check_decay_envelope(const Trajectory& traj, double slack) {
  if (traj.flow != FlowKind::Elastic) {
    throw Error(ErrorKind::InvalidArgument, "the decay envelope is stated for the elastic flow");
  }
  require_records(traj, 1, "decay envelope");
  const auto& r0 = traj.records.front();
  const double product = r0.length * r0.energy;
  if (product > kDecayEnvelopeThreshold) {
    throw Error(ErrorKind::HypothesisNotMet,
                "initial L*E = " + std::to_string(product) + " exceeds 4 pi / 7");
  }
  const double l0sq3 = 3.0 * r0.length * r0.length;
  const double k1 = r0.ks_l2sq;
  MonotonicityReport rep = start("|k_s|^2 over envelope - 1", slack);
  for (const auto& r : traj.records) {
    const double envelope = l0sq3 * k1 / (k1 * r.t + l0sq3);
    double excess;
    if (envelope > 0.0) {
      excess = r.ks_l2sq / envelope - 1.0;
    } else {
      excess = r.ks_l2sq > 0.0 ? std::numeric_limits<double>::infinity() : -1.0;
    }
    note(rep, excess, r.t);
  }
  finish(rep);
  return rep;
}

RateFit fit_exponential_rate(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() != v.size()) throw Error(ErrorKind::InvalidArgument, "time and value columns differ in length");
  if (t.size() < 3) throw Error(ErrorKind::InsufficientRecords, "rate fit needs at least 3 points");
  std::vector<double> y;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) {
      throw Error(ErrorKind::NonPositiveField, "value " + std::to_string(v[i]) + " at t = " + std::to_string(t[i]));
    }
    y.push_back(std::log(v[i]));
  }
  const double n = static_cast<double>(t.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(stt > 0.0)) throw Error(ErrorKind::InvalidArgument, "rate fit needs distinct times");
  RateFit fit;
  const double slope = sty / stt;
  fit.rate = -slope;
  fit.quality = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
  fit.points = t.size();
  return fit;
}

RateFit fit_exponential_rate(const Trajectory& traj, std::string_view field, double window) {
  if (!(window > 0.0 && window <= 1.0)) throw Error(ErrorKind::InvalidArgument, "window must lie in (0, 1]");
  const std::size_t n = traj.records.size();
  const auto first = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - window)));
  std::vector<double> t, v;
  for (std::size_t i = first; i < n; ++i) {
    t.push_back(traj.records[i].t);
    v.push_back(record_field(traj.records[i], field));
  }
  return fit_exponential_rate(t, v);
}

MonotonicityReport check_boundary_parity(const Trajectory& traj) {
  MonotonicityReport rep = start("endpoint |k_s|, |k_sss|", 0.0);
  const auto audit = [&](const Curve& c, double t) {
    const FrameField f = compute_frame(c);
    const std::size_t last = f.size() - 1;
    const double worst = std::max({std::abs(f.ks[0]), std::abs(f.ks[last]), std::abs(f.ksss[0]), std::abs(f.ksss[last])});
    note(rep, worst, t);
  };
  for (const auto& s : traj.snapshots) audit(s.curve, s.t);
  if (!traj.final_curve.nodes.empty()) audit(traj.final_curve, traj.records.empty() ? 0.0 : traj.records.back().t);
  if (rep.worst_violation == -std::numeric_limits<double>::infinity()) rep.worst_violation = 0.0;
  finish(rep);
  return rep;
}

}  // namespace plflow
