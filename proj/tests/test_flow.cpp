#include <doctest.h>

#include "plflow/curve.hpp"
#include "plflow/flow.hpp"
#include "plflow/io.hpp"
#include "support.hpp"

using namespace plflow;
using namespace plflow::test;

namespace {

double pi4() { return kPi * kPi * kPi * kPi; }

}  // namespace

TEST_CASE("normal velocity vanishes on a segment") {
  const auto f = compute_frame(segment(64));
  for (auto flow : {FlowKind::CurveDiffusion, FlowKind::Elastic}) {
    for (double v : normal_velocity(f, flow)) CHECK(v == 0.0);
  }
}

TEST_CASE("normal velocity on a circular arc") {
  // Uniform unit-circle arc through (0, 1); curvature is -1 in this orientation.
  Curve c;
  const std::size_t n = 128;
  const double half = kPi / 3.0;
  c.boundary.gap = 2.0 * std::sin(half);
  for (std::size_t j = 0; j <= n; ++j) {
    const double phi = -half + 2.0 * half * static_cast<double>(j) / n;
    c.nodes.push_back({std::sin(phi), std::cos(phi)});
  }
  const auto frame = compute_frame(c, EndpointTreatment::OneSided);
  const auto cd = normal_velocity(frame, FlowKind::CurveDiffusion);
  const auto e = normal_velocity(frame, FlowKind::Elastic);
  for (std::size_t i = 4; i + 4 < c.nodes.size(); ++i) {
    CHECK(std::abs(cd[i]) <= 1e-6);
    CHECK(e[i] == doctest::Approx(0.5 * std::pow(frame.k[i], 3)).epsilon(1e-6));
    CHECK(std::abs(e[i]) == doctest::Approx(0.5).epsilon(1e-3));
  }
}

TEST_CASE("curve-diffusion velocity of a small cosine matches the linearization") {
  const double a = 0.01;
  const Curve c = cosine_graph(a, 256);
  const auto f = normal_velocity(compute_frame(c), FlowKind::CurveDiffusion);
  double err = 0.0;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    err = std::max(err, std::abs(f[i] - a * pi4() * std::cos(kPi * (c.nodes[i].x + 0.5))));
  }
  CHECK(err <= 1e-2 * a * pi4());
}

TEST_CASE("steppers leave the segment fixed") {
  const Curve c = segment(64);
  const double dt = explicit_time_step(c, 1.0 / 16);
  for (auto flow : {FlowKind::CurveDiffusion, FlowKind::Elastic}) {
    CHECK(max_displacement(step_explicit(c, flow, dt).curve, c) <= 1e-14);
    CHECK(max_displacement(step_semi_implicit(c, flow, 1e-3).curve, c) <= 1e-12);
  }
  CHECK(error_kind([&] { step_explicit(c, FlowKind::CurveDiffusion, 0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("explicit Euler step decays the first mode at rate pi^4") {
  const double a = 0.01;
  const Curve c = cosine_graph(a, 64);
  const double dt = explicit_time_step(c, 1.0 / 16);
  StepOptions raw;
  raw.resample = false;
  const Curve next = step_explicit(c, FlowKind::CurveDiffusion, dt, raw).curve;
  const double decrement = (c.nodes.front().y - next.nodes.front().y) / a;
  CHECK(decrement == doctest::Approx(dt * pi4()).epsilon(0.01));
  CHECK(next.nodes.front().x == -0.5);
  CHECK(next.nodes.back().x == 0.5);
}

TEST_CASE("explicit steps beyond the stability limit are caught") {
  const Curve c = resample_uniform(cosine_graph(0.01, 256), 32);
  SolverConfig cfg;
  cfg.nodes = 32;
  cfg.stepping = Stepping::Explicit;
  cfg.cfl = 2.0;
  cfg.t_max = 100 * explicit_time_step(c, 2.0);
  const auto traj = run(c, FlowKind::CurveDiffusion, cfg);
  const bool caught = traj.stop == StopReason::CurvatureBlowup || traj.stop == StopReason::NumericalFailure ||
                      traj.stop == StopReason::NodeCollapse;
  CHECK(caught);
  CHECK(traj.steps <= 100);
}

TEST_CASE("semi-implicit step is stable far beyond the explicit limit") {
  const double a = 0.01;
  const Curve c = cosine_graph(a, 64);
  StepOptions raw;
  raw.resample = false;

  const double dt = 10 * explicit_time_step(c, 1.0 / 16);
  const Curve next = step_semi_implicit(c, FlowKind::CurveDiffusion, dt, raw).curve;
  const double decrement = (c.nodes.front().y - next.nodes.front().y) / a;
  CHECK(decrement == doctest::Approx(1.0 - std::exp(-dt * pi4())).epsilon(0.05));

  const double big = 0.1 / pi4();
  const Curve far = step_semi_implicit(c, FlowKind::CurveDiffusion, big, raw).curve;
  CHECK(far.nodes.front().y / a == doctest::Approx(std::exp(-big * pi4())).epsilon(0.05));
}

TEST_CASE("semi-implicit and explicit steps agree to second order in dt") {
  const Curve c = cosine_graph(0.01, 64);
  StepOptions raw;
  raw.resample = false;
  const double h = 1.0 / 64;
  const auto diff = [&](double dt) {
    return max_displacement(step_semi_implicit(c, FlowKind::Elastic, dt, raw).curve,
                            step_explicit(c, FlowKind::Elastic, dt, raw).curve);
  };
  const double dt = h * h * h * h;
  const double d1 = diff(dt), d2 = diff(dt / 2);
  CHECK(d1 > 0.0);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("solver configuration validation") {
  SolverConfig ok;
  CHECK_NOTHROW(validate_config(ok));
  const auto kind = [](auto mutate) {
    SolverConfig c;
    mutate(c);
    return error_kind([&] { validate_config(c); });
  };
  CHECK(kind([](SolverConfig& c) { c.nodes = 4; }) == ErrorKind::ValidationError);
  CHECK(kind([](SolverConfig& c) { c.t_max = 0.0; }) == ErrorKind::ValidationError);
  CHECK(kind([](SolverConfig& c) { c.cfl = -1.0; }) == ErrorKind::ValidationError);
  CHECK(kind([](SolverConfig& c) { c.record_interval = 0.0; }) == ErrorKind::ValidationError);
  CHECK(kind([](SolverConfig& c) { c.max_displacement = 0.0; }) == ErrorKind::ValidationError);
}

TEST_CASE("small curve-diffusion run converges to a horizontal translate") {
  const Curve c = resample_uniform(cosine_graph(0.05, 1024), 64);
  SolverConfig cfg;
  cfg.nodes = 64;
  cfg.t_max = 1.0;
  cfg.record_interval = 1e-3;
  const auto traj = run(c, FlowKind::CurveDiffusion, cfg);
  REQUIRE(traj.stop == StopReason::Converged);
  CHECK(traj.records.back().kinf <= 1e-6);
  const auto& nodes = traj.final_curve.nodes;
  for (const auto& p : nodes) CHECK(std::abs(p.y - nodes.front().y) <= 1e-6);
  CHECK(nodes.front().x == -0.5);
  CHECK(nodes.back().x == 0.5);
}

TEST_CASE("runs are deterministic") {
  const Curve c = resample_uniform(cosine_graph(0.1, 1024), 48);
  SolverConfig cfg;
  cfg.nodes = 48;
  cfg.t_max = 5e-3;
  cfg.record_interval = 5e-4;
  for (auto flow : {FlowKind::CurveDiffusion, FlowKind::Elastic}) {
    const auto a = run(c, flow, cfg), b = run(c, flow, cfg);
    CHECK(trajectory_csv(a) == trajectory_csv(b));
    CHECK(a.steps == b.steps);
  }
}
