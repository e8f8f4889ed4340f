#include "plflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plflow/error.hpp"
#include "plflow/io.hpp"

namespace plflow {

namespace {

std::string stop_token(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::CurvatureBlowup: return "curvature-blowup";
    case StopReason::NodeCollapse: return "node-collapse";
    case StopReason::MaxTime: return "max-time";
    case StopReason::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

CheckVerdict from_report(const std::string& check, const std::string& identity, const MonotonicityReport& r) {
  CheckVerdict v;
  v.check = check;
  v.identity = identity;
  v.pass = r.verdict;
  v.worst = r.worst_violation;
  v.slack = r.slack;
  v.time = r.worst_time;
  if (r.first_violation_time) v.note = "first violation at t = " + format_double(*r.first_violation_time);
  return v;
}

std::string field_of(const std::string& token) { return token.substr(token.find(':') + 1); }

void evaluate_token(const ScenarioSpec& spec, const Trajectory& traj, const std::string& token, SummaryReport& out) {
  const auto& s = spec.settings;
  if (token.rfind("stop=", 0) == 0) {
    CheckVerdict v;
    v.check = token;
    v.identity = "stop reason = " + token.substr(5);
    v.pass = stop_token(traj.stop) == token.substr(5);
    v.worst = v.pass ? 0.0 : 1.0;
    v.time = traj.records.empty() ? 0.0 : traj.records.back().t;
    v.note = std::string(to_string(traj.stop)) + (traj.stop_detail.empty() ? "" : ": " + traj.stop_detail);
    out.checks.push_back(v);
  } else if (token.rfind("non-increasing:", 0) == 0) {
    const auto f = field_of(token);
    out.checks.push_back(
        from_report(token, f + "(t2) <= " + f + "(t1) for t2 > t1", check_non_increasing(traj, f, s.monotone)));
  } else if (token.rfind("strictly-decreasing:", 0) == 0) {
    const auto f = field_of(token);
    out.checks.push_back(
        from_report(token, f + "(t2) < " + f + "(t1) for t2 > t1", check_non_increasing(traj, f, s.monotone, true)));
  } else if (token == "length-identity") {
    out.checks.push_back(from_report(
        token, traj.flow == FlowKind::CurveDiffusion ? "dL/dt = -int k_s^2 ds" : "dL/dt = int k F ds",
        check_length_identity(traj, s.identity_skip, s.length_tolerance)));
  } else if (token == "winding") {
    const auto w = check_winding_and_kbar(traj, s.winding_tolerance, s.kbar_tolerance);
    out.checks.push_back(from_report("winding", "int k ds = 2 omega pi, constant in t", w.winding));
    out.checks.push_back(from_report(
        "kbar",
        traj.flow == FlowKind::CurveDiffusion ? "dkbar/dt = 2 omega pi |k_s|^2 / L^2" : "kbar = 2 omega pi / L",
        w.kbar));
  } else if (token == "kosc-evolution") {
    out.checks.push_back(from_report(token,
                                     "dK_osc/dt + K_osc |k_s|^2 / L + 2 L |k_ss|^2 = 3 L int (k - kbar)^2 k_s^2 "
                                     "+ 6 kbar L int (k - kbar) k_s^2 + 2 kbar^2 L |k_s|^2",
                                     check_kosc_evolution(traj, 0, s.kosc_tolerance)));
  } else if (token == "time-integral") {
    out.checks.push_back(from_report(token, "int_0^T K_osc dt < L(0)^4 / (4 pi^2)", check_time_integral_bound(traj)));
  } else if (token == "decay-envelope") {
    out.checks.push_back(from_report(token, "|k_s|^2(t) <= 3 L0^2 K1 / (K1 t + 3 L0^2)",
                                     check_decay_envelope(traj, s.envelope_slack)));
  } else if (token == "boundary-parity") {
    out.checks.push_back(from_report(token, "k_s = k_sss = 0 at both endpoints", check_boundary_parity(traj)));
  } else if (token.rfind("rate:", 0) == 0) {
    const auto f = field_of(token);
    const auto fit = fit_exponential_rate(traj, f, s.rate_window);
    out.rates.push_back({f, fit});
    CheckVerdict v;
    v.check = token;
    v.identity = f + "(t) ~ C exp(-rate t)";
    v.pass = fit.quality >= s.min_rate_quality;
    v.note = "rate = " + format_double(fit.rate) + ", quality = " + format_double(fit.quality);
    if (s.expected_rate) {
      v.worst = std::abs(fit.rate / *s.expected_rate - 1.0);
      v.slack = s.rate_tolerance;
      v.pass = v.pass && v.worst <= s.rate_tolerance;
      v.note += ", expected " + format_double(*s.expected_rate);
    } else {
      v.worst = 1.0 - fit.quality;
      v.slack = 1.0 - s.min_rate_quality;
    }
    out.checks.push_back(v);
  } else {
    throw Error(ErrorKind::ValidationError, "unknown check '" + token + "'");
  }
}

void put(std::string& out, const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; }

void put_record(std::string& out, const std::string& prefix, const DiagnosticsRecord& r) {
  const std::pair<const char*, double> rows[] = {
      {"t", r.t},       {"L", r.length},         {"E", r.energy},           {"Kosc", r.kosc},
      {"omega_hat", r.omega_hat}, {"kbar", r.kbar}, {"ks_l2sq", r.ks_l2sq}, {"kss_l2sq", r.kss_l2sq},
      {"area", r.area}, {"gamma_sup", r.gamma_sup}, {"kinf", r.kinf}};
  for (const auto& [k, v] : rows) put(out, prefix + k, format_double(v));
  put(out, prefix + "isoper", r.isoperimetric ? format_double(*r.isoperimetric) : "undefined");
}

}  // namespace

bool SummaryReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckVerdict& v) { return v.pass; });
}

SummaryReport evaluate(const ScenarioSpec& spec, const Trajectory& traj) {
  SummaryReport out;
  out.name = spec.name;
  out.flow = traj.flow;
  out.stop = traj.stop;
  out.stop_detail = traj.stop_detail;
  out.steps = traj.steps;
  out.wall_seconds = traj.wall_seconds;
  if (!traj.records.empty()) {
    out.initial = traj.records.front();
    out.final = traj.records.back();
  }
  for (const auto& token : spec.checks) {
    const std::size_t before = out.checks.size();
    try {
      evaluate_token(spec, traj, token, out);
    } catch (const Error& e) {
      out.checks.resize(before);
      CheckVerdict v;
      v.check = token;
      v.pass = false;
      v.worst = std::numeric_limits<double>::infinity();
      v.note = e.what();
      out.checks.push_back(v);
    }
  }
  return out;
}

ScenarioRun run_scenario(const ScenarioSpec& spec) {
  ScenarioRun r;
  r.initial = generate_initial(spec);
  r.trajectory = run(r.initial, spec.flow, spec.solver);
  r.summary = evaluate(spec, r.trajectory);
  return r;
}

std::string summary_text(const SummaryReport& report) {
  std::string out;
  put(out, "name", report.name);
  put(out, "flow", report.flow == FlowKind::CurveDiffusion ? "cd" : "e");
  put(out, "stop", to_string(report.stop));
  put(out, "stop_detail", report.stop_detail.empty() ? "-" : report.stop_detail);
  put(out, "steps", std::to_string(report.steps));
  put(out, "wall_seconds", format_double(report.wall_seconds));
  put_record(out, "initial.", report.initial);
  put_record(out, "final.", report.final);
  for (const auto& r : report.rates) {
    put(out, "rate." + r.field, format_double(r.fit.rate));
    put(out, "rate." + r.field + ".quality", format_double(r.fit.quality));
    put(out, "rate." + r.field + ".points", std::to_string(r.fit.points));
  }
  for (const auto& c : report.checks) put(out, "check." + c.check, c.pass ? "pass" : "fail");
  put(out, "all_pass", report.all_pass() ? "true" : "false");
  return out;
}

std::string verification_text(const std::vector<CheckVerdict>& checks) {
  std::string out;
  for (const auto& c : checks) {
    out += "[" + c.check + "]\n";
    put(out, "identity", c.identity.empty() ? "-" : c.identity);
    put(out, "verdict", c.pass ? "pass" : "fail");
    put(out, "worst", format_double(c.worst));
    put(out, "slack", format_double(c.slack));
    put(out, "worst_time", c.time ? format_double(*c.time) : "-");
    if (!c.note.empty()) put(out, "note", c.note);
    out += "\n";
  }
  return out;
}

void write_run(const ScenarioSpec& spec, const ScenarioRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "scenario.txt", render(spec));
  write_curve_csv(run.initial, dir / "initial.csv");
  write_curve_csv(run.trajectory.final_curve, dir / "final.csv");
  write_trajectory_csv(run.trajectory, dir / "trajectory.csv");
  write_text(dir / "summary.txt", summary_text(run.summary));
  write_text(dir / "report.txt", verification_text(run.summary.checks));
  if (!run.trajectory.snapshots.empty()) write_snapshots(run.trajectory, dir / "snapshots");
}

}  // namespace plflow
