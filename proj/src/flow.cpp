#include "plflow/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "plflow/banded.hpp"
#include "plflow/curve.hpp"
#include "plflow/error.hpp"

namespace plflow {

const char* to_string(Stepping stepping) {
  return stepping == Stepping::Explicit ? "explicit" : "semi-implicit";
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "Converged";
    case StopReason::CurvatureBlowup: return "CurvatureBlowup";
    case StopReason::NodeCollapse: return "NodeCollapse";
    case StopReason::MaxTime: return "MaxTime";
    case StopReason::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

void validate_config(const SolverConfig& c) {
  const auto fail = [](const std::string& what) { throw Error(ErrorKind::ValidationError, what); };
  if (c.nodes < kMinSegments) fail("nodes must be at least 8");
  if (c.cfl && !(*c.cfl > 0.0)) fail("cfl must be positive");
  if (c.resample_period == 0) fail("resample_period must be positive");
  if (!(c.t_max > 0.0)) fail("t_max must be positive");
  if (!(c.convergence_tol > 0.0)) fail("convergence_tol must be positive");
  if (!(c.blowup_threshold > 0.0)) fail("blowup_threshold must be positive");
  if (!(c.resolution_limit > 0.0)) fail("resolution_limit must be positive");
  if (!(c.min_spacing_fraction > 0.0)) fail("min_spacing_fraction must be positive");
  if (!(c.max_displacement > 0.0)) fail("max_displacement must be positive");
  if (!(c.record_interval > 0.0)) fail("record_interval must be positive");
}

std::vector<double> normal_velocity(const FrameField& frame, FlowKind flow) {
  std::vector<double> f(frame.kss);
  if (flow == FlowKind::Elastic) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += 0.5 * frame.k[i] * frame.k[i] * frame.k[i];
  }
  return f;
}

double explicit_time_step(const Curve& curve, double cfl) {
  const double h = min_spacing(curve);
  return cfl * h * h * h * h;
}

namespace {

void snap_endpoints(Curve& c) {
  c.nodes.front().x = c.boundary.left_x();
  c.nodes.back().x = c.boundary.right_x();
}

void check_finite(const Curve& c) {
  for (const Vec2& p : c.nodes) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::NumericalFailure, "non-finite node after step");
    }
  }
}

Curve finish(Curve next, const StepOptions& options) {
  snap_endpoints(next);
  check_finite(next);
  if (options.resample) next = resample_uniform(next, next.segments());
  return next;
}

Curve advance_explicit(const Curve& curve, const FrameField& frame, FlowKind flow, double dt) {
  const auto f = normal_velocity(frame, flow);
  Curve next = curve;
  for (std::size_t i = 0; i < next.nodes.size(); ++i) next.nodes[i] -= dt * f[i] * frame.normal[i];
  return next;
}

// Five-point fourth derivative weights: 24 / prod_{m != j} (s_j - s_m).
std::array<double, 5> fourth_derivative_5pt(const std::array<double, 5>& s) {
  std::array<double, 5> w{};
  for (std::size_t j = 0; j < 5; ++j) {
    double prod = 1.0;
    for (std::size_t m = 0; m < 5; ++m) {
      if (m != j) prod *= s[j] - s[m];
    }
    w[j] = 24.0 / prod;
  }
  return w;
}

// I + dt D4 acting on one coordinate; parity -1 for x (odd about each line), +1 for y.
PentadiagonalMatrix implicit_operator(const FrameField& frame, double dt, double parity) {
  const long n = static_cast<long>(frame.size()) - 1;
  const double len = frame.length;
  const auto s_ext = [&](long j) {
    if (j < 0) return -frame.s[static_cast<std::size_t>(-j)];
    if (j > n) return 2.0 * len - frame.s[static_cast<std::size_t>(2 * n - j)];
    return frame.s[static_cast<std::size_t>(j)];
  };
  PentadiagonalMatrix m(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) {
    std::array<double, 5> grid{};
    for (long q = 0; q < 5; ++q) grid[static_cast<std::size_t>(q)] = s_ext(i - 2 + q);
    const auto w = fourth_derivative_5pt(grid);
    const auto row = static_cast<std::size_t>(i);
    m.add(row, row, 1.0);
    for (long q = 0; q < 5; ++q) {
      long j = i - 2 + q;
      double sign = 1.0;
      if (j < 0) {
        j = -j;
        sign = parity;
      } else if (j > n) {
        j = 2 * n - j;
        sign = parity;
      }
      m.add(row, static_cast<std::size_t>(j), dt * sign * w[static_cast<std::size_t>(q)]);
    }
  }
  return m;
}

Curve advance_semi_implicit(const Curve& curve, const FrameField& frame, FlowKind flow, double dt) {
  const auto f = normal_velocity(frame, flow);
  const std::size_t count = curve.nodes.size();
  std::vector<double> rx(count), ry(count);
  for (std::size_t i = 0; i < count; ++i) {
    rx[i] = -dt * f[i] * frame.normal[i].x;
    ry[i] = -dt * f[i] * frame.normal[i].y;
  }
  const PentadiagonalLU lx(implicit_operator(frame, dt, -1.0));
  const PentadiagonalLU ly(implicit_operator(frame, dt, +1.0));
  const auto dx = lx.solve(rx);
  const auto dy = ly.solve(ry);
  Curve next = curve;
  for (std::size_t i = 0; i < count; ++i) next.nodes[i] += Vec2{dx[i], dy[i]};
  return next;
}

}  // namespace

StepResult step_explicit(const Curve& curve, FlowKind flow, double dt, StepOptions options) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  const FrameField frame = compute_frame(curve);
  return {finish(advance_explicit(curve, frame, flow, dt), options), dt};
}

StepResult step_semi_implicit(const Curve& curve, FlowKind flow, double dt, StepOptions options) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  const FrameField frame = compute_frame(curve);
  return {finish(advance_semi_implicit(curve, frame, flow, dt), options), dt};
}

Trajectory run(const Curve& initial, FlowKind flow, const SolverConfig& config) {
  validate_config(config);
  validate_curve(initial);
  const auto wall_start = std::chrono::steady_clock::now();

  Trajectory traj;
  traj.flow = flow;
  traj.boundary = initial.boundary;

  const double gap = initial.boundary.gap;
  const double cfl = config.effective_cfl();
  Curve cur = resample_uniform(initial, config.nodes);
  snap_endpoints(cur);

  double t = 0.0;
  double next_record = config.record_interval;
  double last_recorded = -1.0;

  const auto record = [&](const Curve& c, const FrameField& fr) {
    DiagnosticsRecord r = measure(c, fr, flow);
    r.t = t;
    traj.records.push_back(r);
    if (config.snapshots == SnapshotPolicy::EveryRecord) traj.snapshots.push_back({t, c});
    last_recorded = t;
  };

  try {
    FrameField frame = compute_frame(cur);
    record(cur, frame);
    std::size_t step = 0;
    for (;;) {
      double kmax = 0.0, turn = 0.0;
      for (std::size_t i = 0; i < frame.size(); ++i) {
        kmax = std::max(kmax, std::abs(frame.k[i]));
        const double hloc = 0.5 * ((i > 0 ? frame.s[i] - frame.s[i - 1] : frame.s[1]) +
                                   (i + 1 < frame.size() ? frame.s[i + 1] - frame.s[i] : frame.s[i] - frame.s[i - 1]));
        turn = std::max(turn, hloc * std::abs(frame.k[i]));
      }
      double ks2 = 0.0;
      const auto w = trapezoid_weights(frame);
      for (std::size_t i = 0; i < frame.size(); ++i) ks2 += w[i] * frame.ks[i] * frame.ks[i];
      const double kinf = gap * kmax;
      const double ks_proxy = std::pow(gap, 1.5) * std::sqrt(ks2);

      if (!std::isfinite(kinf) || !std::isfinite(ks_proxy)) {
        throw Error(ErrorKind::NumericalFailure, "non-finite curvature");
      }
      if (kinf >= config.blowup_threshold || ks_proxy >= config.blowup_threshold ||
          turn >= config.resolution_limit) {
        traj.stop = StopReason::CurvatureBlowup;
        traj.stop_detail = "gap*|k|_inf=" + std::to_string(kinf) + " gap^1.5*|k_s|_2=" +
                           std::to_string(ks_proxy) + " max edge turning=" + std::to_string(turn);
        break;
      }
      if (min_spacing(cur) < config.min_spacing_fraction * gap) {
        traj.stop = StopReason::NodeCollapse;
        break;
      }
      if (kinf <= config.convergence_tol) {
        traj.stop = StopReason::Converged;
        break;
      }
      if (t >= config.t_max) {
        traj.stop = StopReason::MaxTime;
        break;
      }
      if (step >= config.max_steps) {
        traj.stop = StopReason::MaxTime;
        traj.stop_detail = "step budget exhausted";
        break;
      }

      double dt = config.stepping == Stepping::Explicit
                      ? explicit_time_step(cur, cfl)
                      : cfl * std::pow(frame.length / static_cast<double>(cur.segments()), 2) * gap * gap;
      if (config.stepping == Stepping::SemiImplicit) {
        double fmax = 0.0;
        for (double v : normal_velocity(frame, flow)) fmax = std::max(fmax, std::abs(v));
        if (fmax > 0.0) dt = std::min(dt, config.max_displacement * min_spacing(cur) / fmax);
      }
      dt = std::min(dt, config.t_max - t);
      if (!(dt > 0.0)) dt = std::numeric_limits<double>::min();

      Curve next = config.stepping == Stepping::Explicit ? advance_explicit(cur, frame, flow, dt)
                                                         : advance_semi_implicit(cur, frame, flow, dt);
      ++step;
      StepOptions opts;
      opts.resample = step % config.resample_period == 0;
      cur = finish(std::move(next), opts);
      t += dt;
      frame = compute_frame(cur);

      if (t >= next_record * (1.0 - 1e-12)) {
        record(cur, frame);
        while (next_record <= t * (1.0 + 1e-12)) next_record += config.record_interval;
      }
    }
    traj.steps = step;
    if (last_recorded < t) record(cur, frame);
  } catch (const Error& e) {
    traj.stop = StopReason::NumericalFailure;
    traj.stop_detail = e.what();
  }

  traj.final_curve = cur;
  traj.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return traj;
}

}  // namespace plflow
