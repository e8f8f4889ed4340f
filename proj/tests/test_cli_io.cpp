#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "plflow/curve.hpp"
#include "plflow/io.hpp"
#include "plflow/plot.hpp"
#include "plflow/report.hpp"
#include "plflow/scenario.hpp"
#include "support.hpp"

using namespace plflow;
using namespace plflow::test;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("plflow-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kMinimal = R"(# minimal curve-diffusion scenario
name = minimal
flow = cd
gap = 1
generator = perturbed-segment
amplitude = 0.01   # length
modes = 1
nodes = 256
)";

Trajectory short_run(FlowKind flow) {
  ScenarioSpec spec = parse_scenario(kMinimal);
  spec.flow = flow;
  spec.solver.nodes = 32;
  spec.solver.t_max = 2e-3;
  spec.solver.record_interval = 5e-4;
  spec.solver.snapshots = SnapshotPolicy::EveryRecord;
  return run(generate_initial(spec), flow, spec.solver);
}

}  // namespace

TEST_CASE("minimal scenario fills every default") {
  const auto spec = parse_scenario(kMinimal);
  CHECK(spec.name == "minimal");
  CHECK(spec.flow == FlowKind::CurveDiffusion);
  CHECK(spec.gap == 1.0);
  CHECK(spec.generator.kind == GeneratorKind::PerturbedSegment);
  CHECK(spec.generator.amplitude == 0.01);
  CHECK(spec.generator.modes == std::vector<int>{1});
  CHECK(spec.solver.nodes == 256);
  CHECK(spec.solver == [] {
    SolverConfig c;
    c.nodes = 256;
    return c;
  }());
  CHECK(spec.settings == CheckSettings{});
  CHECK(spec.checks.empty());
}

TEST_CASE("scenario validation errors") {
  const auto message = [](const std::string& text) {
    try {
      parse_scenario(text);
    } catch (const Error& e) {
      return std::string(to_string(e.kind())) + "|" + e.what();
    }
    return std::string("no error");
  };
  CHECK(message(override_key(kMinimal, "gap", "0")).find("ValidationError|ValidationError: gap must be positive") == 0);
  const std::string exterior = override_key(override_key(kMinimal, "generator", "exterior"), "omega", "0.3");
  CHECK(message(exterior).find("multiple of 1/2") != std::string::npos);
  CHECK(message(override_key(kMinimal, "name", "bad/name")).find("ValidationError") == 0);
  CHECK(message(override_key(kMinimal, "flow", "x")).find("ParseError") == 0);
  CHECK(message(std::string(kMinimal) + "bogus = 1\n").find("unknown key 'bogus'") != std::string::npos);
  CHECK(message(std::string(kMinimal) + "gap = 2\n").find("duplicate") != std::string::npos);
  CHECK(message(override_key(kMinimal, "nodes", "-3")).find("ParseError") == 0);
  CHECK(message(override_key(kMinimal, "nodes", "4")).find("ValidationError") == 0);
  CHECK(message(override_key(kMinimal, "checks", "decay-envelope")).find("flow e only") != std::string::npos);
  CHECK(message(override_key(kMinimal, "checks", "rate:nope")).find("unknown check") != std::string::npos);
  CHECK(message("flow = cd\n").find("missing required key 'name'") != std::string::npos);
  CHECK(message("name = x\nflow = cd\nnodes\n").find("line 3") != std::string::npos);
}

TEST_CASE("render and parse round trip") {
  for (const auto& name : preset_names()) {
    if (!is_flow_preset(name)) continue;
    CAPTURE(name);
    const auto spec = parse_scenario(preset_text(name));
    CHECK(parse_scenario(render(spec)) == spec);
  }
  ScenarioSpec spec = parse_scenario(kMinimal);
  spec.generator.kind = GeneratorKind::Exterior;
  spec.generator.omega = -1.5;
  spec.generator.seed = 18446744073709551615ull;
  spec.generator.modes = {1, 3, 7};
  spec.generator.amplitude = 0.1 + 0.2;
  spec.solver.cfl = 1.0 / 3.0;
  spec.solver.stepping = Stepping::Explicit;
  spec.solver.snapshots = SnapshotPolicy::EveryRecord;
  spec.settings.expected_rate = 194.81818206800688;
  spec.settings.monotone = {0.0, 1e-8};
  spec.checks = {"stop=max-time", "non-increasing:E", "winding", "rate:kss_l2sq"};
  CHECK(parse_scenario(render(spec)) == spec);
}

TEST_CASE("override_key replaces or appends") {
  const auto text = override_key(kMinimal, "amplitude", "0.02");
  CHECK(parse_scenario(text).generator.amplitude == 0.02);
  CHECK(parse_scenario(override_key(kMinimal, "t_max", "3")).solver.t_max == 3.0);
}

TEST_CASE("perturbed-segment generator") {
  ScenarioSpec spec = parse_scenario(kMinimal);
  spec.generator.amplitude = 0.0;
  const Curve flat = generate_initial(spec);
  REQUIRE(flat.nodes.size() == 257);
  for (std::size_t i = 0; i < flat.nodes.size(); ++i) {
    CHECK(flat.nodes[i].y == 0.0);
    CHECK(flat.nodes[i].x == doctest::Approx(-0.5 + static_cast<double>(i) / 256).epsilon(1e-14));
  }

  spec.generator.target_product = 0.9 * kPi / 10.0;
  const auto r = measure(generate_initial(spec), FlowKind::CurveDiffusion);
  CHECK(r.length * r.energy == doctest::Approx(0.9 * kPi / 10.0).epsilon(0.02));
  const Curve target = generate_initial(spec);
  CHECK(target.nodes.front().x == -0.5);
  CHECK(target.nodes.back().x == 0.5);

  spec.generator.target_product = kPi;
  spec.generator.amplitude_cap = 0.2;
  CHECK(error_kind([&] { generate_initial(spec); }) == ErrorKind::TargetUnreachable);
}

TEST_CASE("other generators") {
  ScenarioSpec spec = parse_scenario(kMinimal);
  spec.generator.kind = GeneratorKind::Exterior;
  spec.generator.omega = 1.0;
  spec.generator.seed = 4;
  CHECK(measure(generate_initial(spec), FlowKind::CurveDiffusion).omega_hat == doctest::Approx(1.0).epsilon(1e-6));

  spec.generator.kind = GeneratorKind::LemniscateLobe;
  const Curve lobe = generate_initial(spec);
  const auto r = measure(lobe, FlowKind::CurveDiffusion);
  CHECK(std::abs(r.omega_hat) <= 1e-9);
  // Mean of cos(6.5 sin^4(pi v)) over the lobe window is 0.46576.
  CHECK(r.length == doctest::Approx(1.0 / (0.1 + 0.9 * 0.46576)).epsilon(1e-3));

  const fs::path dir = scratch("file-generator");
  write_curve_csv(lobe, dir / "lobe.csv");
  spec.generator.kind = GeneratorKind::File;
  spec.generator.path = (dir / "lobe.csv").string();
  CHECK(generate_initial(spec).nodes == lobe.nodes);
  Curve shifted = lobe;
  shifted.nodes.front().x += 1e-6;
  write_curve_csv(shifted, dir / "shifted.csv");
  spec.generator.path = (dir / "shifted.csv").string();
  CHECK(error_kind([&] { generate_initial(spec); }) == ErrorKind::ValidationError);
}

TEST_CASE("curve and trajectory files round trip") {
  const fs::path dir = scratch("io");
  const Curve c = perturbed_segment(1.3, {1, 2}, {0.1, -0.03}, 40);
  write_curve_csv(c, dir / "c.csv");
  const Curve back = read_curve_csv(dir / "c.csv", 1.3);
  CHECK(back.nodes == c.nodes);
  CHECK(back.boundary.gap == 1.3);

  const auto traj = short_run(FlowKind::Elastic);
  write_trajectory_csv(traj, dir / "trajectory.csv");
  const auto table = read_trajectory_csv(dir / "trajectory.csv");
  REQUIRE(table.rows() == traj.records.size());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    CHECK(table.column("t")[i] == traj.records[i].t);
    CHECK(table.column("Kosc")[i] == traj.records[i].kosc);
    CHECK(std::isnan(table.column("isoper")[i]));
  }

  write_snapshots(traj, dir / "snapshots");
  const auto snaps = read_snapshot_index(dir / "snapshots");
  REQUIRE(snaps.size() == traj.snapshots.size());
  CHECK(snaps.back().t == traj.snapshots.back().t);
  CHECK(read_curve_csv(snaps.back().path, 1.0).nodes == traj.snapshots.back().curve.nodes);

  std::ofstream(dir / "broken.csv") << "t,L,E\n0,1,0\n";
  try {
    read_trajectory_csv(dir / "broken.csv");
    FAIL("expected MalformedTrajectory");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedTrajectory);
    CHECK(std::string(e.what()).find("missing column 'Kosc'") != std::string::npos);
  }
  CHECK(error_kind([&] { read_curve_csv(dir / "absent.csv", 1.0); }) == ErrorKind::IoError);
  CHECK(error_kind([] { parse_double("1.5x", "field"); }) == ErrorKind::ParseError);
  CHECK(parse_double(format_double(0.1 + 0.2), "v") == 0.1 + 0.2);
}

TEST_CASE("plots are deterministic and cover every column") {
  const fs::path dir = scratch("plots");
  const auto traj = short_run(FlowKind::CurveDiffusion);
  write_trajectory_csv(traj, dir / "trajectory.csv");
  write_snapshots(traj, dir / "snapshots");
  const auto first = emit_plots(dir / "trajectory.csv", dir / "a");
  const auto second = emit_plots(dir / "trajectory.csv", dir / "b");
  REQUIRE(first.size() == 13);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(read_text(first[i]) == read_text(second[i]));
    CAPTURE(first[i]);
    // The isoperimetric ratio is undefined on curves enclosing no area.
    const bool empty = first[i].filename() == "plot_isoper.svg";
    CHECK((read_text(first[i]).find("<polyline") == std::string::npos) == empty);
  }
  CHECK(first.back().filename() == "plot_snapshots.svg");

  std::ofstream(dir / "broken.csv") << "t,L\n0,1\n";
  CHECK(error_kind([&] { emit_plots(dir / "broken.csv", dir / "c"); }) == ErrorKind::MalformedTrajectory);
}

TEST_CASE("equilibrium plots are flat") {
  PlotSpec plot;
  plot.series.push_back({"L", {0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}});
  const auto svg = render_svg(plot);
  const auto start = svg.find("points=\"") + 8;
  const auto points = svg.substr(start, svg.find('"', start) - start);
  std::vector<std::string> ys;
  std::istringstream in(points);
  std::string pair;
  while (in >> pair) ys.push_back(pair.substr(pair.find(',') + 1));
  REQUIRE(ys.size() == 3);
  CHECK(ys[0] == ys[1]);
  CHECK(ys[1] == ys[2]);
}

TEST_CASE("scenario evaluation reports every requested check") {
  ScenarioSpec spec = parse_scenario(kMinimal);
  spec.solver.nodes = 32;
  spec.solver.t_max = 2e-3;
  spec.solver.record_interval = 5e-4;
  spec.checks = {"stop=max-time", "non-increasing:Kosc", "winding", "time-integral", "boundary-parity", "rate:E",
                 "stop=converged"};
  const auto run = run_scenario(spec);
  const auto& s = run.summary;
  REQUIRE(s.checks.size() == 8);
  for (std::size_t i = 0; i < 7; ++i) CHECK(s.checks[i].pass);
  CHECK(s.checks[2].check == "winding");
  CHECK(s.checks[3].check == "kbar");
  CHECK_FALSE(s.checks[7].pass);
  CHECK_FALSE(s.all_pass());
  REQUIRE(s.rates.size() == 1);
  CHECK(s.rates[0].fit.rate > 0.0);

  ScenarioSpec needs_snapshots = spec;
  needs_snapshots.checks = {"kosc-evolution"};
  const auto missing = evaluate(needs_snapshots, run.trajectory);
  REQUIRE(missing.checks.size() == 1);
  CHECK_FALSE(missing.checks[0].pass);
  CHECK(missing.checks[0].note.find("MissingSnapshots") != std::string::npos);
  spec.checks.pop_back();

  const fs::path dir = scratch("report");
  write_run(spec, run, dir / spec.name);
  for (const char* f : {"scenario.txt", "initial.csv", "final.csv", "trajectory.csv", "summary.txt", "report.txt"}) {
    CHECK(fs::exists(dir / spec.name / f));
  }
  CHECK(parse_scenario(read_text(dir / spec.name / "scenario.txt")) == spec);
  const auto summary = read_text(dir / spec.name / "summary.txt");
  CHECK(summary.find("stop = MaxTime") != std::string::npos);
  CHECK(summary.find("all_pass = false") != std::string::npos);
  CHECK(read_text(dir / spec.name / "report.txt").find("[stop=converged]\nidentity = stop reason = converged\nverdict = fail") !=
        std::string::npos);
}

TEST_CASE("identical specs give bit-identical trajectory files") {
  ScenarioSpec spec = parse_scenario(override_key(kMinimal, "generator", "exterior"));
  spec.generator.seed = 12;
  spec.generator.amplitude = 0.3;
  spec.solver.nodes = 48;
  spec.solver.t_max = 1e-4;
  spec.solver.record_interval = 1e-5;
  CHECK(trajectory_csv(run_scenario(spec).trajectory) == trajectory_csv(run_scenario(spec).trajectory));
}

TEST_CASE("presets") {
  const auto names = preset_names();
  CHECK(names.size() == 8);
  for (const char* n : {"cd-stability", "e-stability", "e-decay-envelope", "lemniscate-singularity"}) {
    CHECK(is_flow_preset(n));
    CHECK_NOTHROW(parse_scenario(preset_text(n)));
  }
  CHECK_FALSE(is_flow_preset("poincare-suite"));
  CHECK(error_kind([] { preset_text("poincare-suite"); }) == ErrorKind::InvalidArgument);
}
