#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "plflow/error.hpp"
#include "plflow/inequalities.hpp"
#include "plflow/io.hpp"
#include "plflow/plot.hpp"
#include "plflow/report.hpp"
#include "plflow/scenario.hpp"
#include "plflow/suites.hpp"

namespace fs = std::filesystem;
using namespace plflow;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PLFLOW_OUT"); env && *env) return env;
  return "plflow-out";
}

std::string scenario_text(const std::string& source) {
  if (is_flow_preset(source)) return preset_text(source);
  if (fs::exists(source)) return read_text(source);
  throw Error(ErrorKind::InvalidArgument, "'" + source + "' is neither a scenario file nor a flow preset");
}

std::string apply_overrides(std::string text, const std::vector<std::string>& sets, std::optional<std::uint64_t> seed) {
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "--set expects key=value, got '" + kv + "'");
    text = override_key(text, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (seed) text = override_key(text, "seed", std::to_string(*seed));
  return text;
}

std::string safe(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  return s;
}

bool run_one(const ScenarioSpec& spec, const fs::path& dir, bool plots, std::ostream& log) {
  const auto result = run_scenario(spec);
  write_run(spec, result, dir);
  if (plots) emit_plots(dir / "trajectory.csv", dir / "plots");
  log << summary_text(result.summary);
  return result.summary.all_pass();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourth-order flows of curves between two parallel lines"};
  app.require_subcommand(1);
  std::string out_flag;
  app.add_option("--out", out_flag, "Output root directory (default: $PLFLOW_OUT or ./plflow-out)");

  std::string run_source;
  std::vector<std::string> run_sets;
  std::optional<std::uint64_t> run_seed;
  bool run_no_plots = false;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario file or flow preset");
  run_cmd->add_option("spec", run_source, "Scenario file or preset name")->required();
  run_cmd->add_option("--set", run_sets, "Override a scenario key, key=value");
  run_cmd->add_option("--seed", run_seed, "Master seed for the initial-data generator");
  run_cmd->add_flag("--no-plots", run_no_plots, "Skip SVG emission");

  std::string suite;
  SuiteOptions suite_options;
  auto* verify_cmd = app.add_subcommand("verify", "Run an inequality or convergence suite");
  verify_cmd->add_option("suite", suite, "exterior-corollary | poincare-suite | linearization-order | convergence-order")
      ->required();
  verify_cmd->add_option("--seed", suite_options.seed, "Master seed");
  verify_cmd->add_option("--threads", suite_options.threads, "Worker threads");
  verify_cmd->add_option("--samples", suite_options.samples, "Random functions per Poincare variant");
  verify_cmd->add_option("--curves", suite_options.curves, "Exterior curves per winding number");

  std::string sweep_source, sweep_param;
  std::vector<std::string> sweep_sets;
  std::optional<std::uint64_t> sweep_seed;
  unsigned sweep_threads = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over a grid of one parameter");
  sweep_cmd->add_option("spec", sweep_source, "Scenario file or preset name")->required();
  sweep_cmd->add_option("--param", sweep_param, "key=v1,v2,...")->required();
  sweep_cmd->add_option("--set", sweep_sets, "Override a scenario key, key=value");
  sweep_cmd->add_option("--seed", sweep_seed, "Master seed; each grid point gets a derived seed");
  sweep_cmd->add_option("--threads", sweep_threads, "Scenarios run in parallel");

  std::string plot_source, plot_dir;
  auto* plot_cmd = app.add_subcommand("plot", "Emit SVG plots for a trajectory CSV");
  plot_cmd->add_option("trajectory", plot_source, "trajectory.csv")->required();
  plot_cmd->add_option("--dir", plot_dir, "Plot directory (default: plots/ next to the trajectory)");

  std::string preset_name;
  auto* presets_cmd = app.add_subcommand("presets", "List presets or print one");
  presets_cmd->add_option("name", preset_name, "Preset to print");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto spec = parse_scenario(apply_overrides(scenario_text(run_source), run_sets, run_seed));
      const fs::path dir = output_root(out_flag) / spec.name;
      const bool pass = run_one(spec, dir, !run_no_plots, std::cout);
      std::cout << "output = " << dir.string() << "\n";
      return pass ? 0 : kExitFail;
    }
    if (*verify_cmd) {
      const auto report = run_suite(suite, suite_options);
      const fs::path dir = output_root(out_flag) / report.name;
      write_suite(report, dir);
      std::cout << suite_text(report) << "output = " << dir.string() << "\n";
      return report.all_pass() ? 0 : kExitFail;
    }
    if (*sweep_cmd) {
      const auto eq = sweep_param.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "--param expects key=v1,v2,...");
      const std::string key = sweep_param.substr(0, eq);
      std::vector<std::string> values;
      std::string item;
      std::istringstream list(sweep_param.substr(eq + 1));
      while (std::getline(list, item, ',')) {
        if (!item.empty()) values.push_back(item);
      }
      if (values.empty()) throw Error(ErrorKind::ParseError, "--param lists no values");
      const std::string base = apply_overrides(scenario_text(sweep_source), sweep_sets, std::nullopt);
      const auto base_spec = parse_scenario(base);
      std::vector<ScenarioSpec> specs;
      for (std::size_t i = 0; i < values.size(); ++i) {
        std::string text = override_key(base, key, values[i]);
        text = override_key(text, "name", base_spec.name + "-" + safe(key) + "-" + safe(values[i]));
        if (sweep_seed) text = override_key(text, "seed", std::to_string(derive_seed(*sweep_seed, i)));
        specs.push_back(parse_scenario(text));
      }
      const fs::path root = output_root(out_flag);
      std::vector<std::string> rows(specs.size());
      std::vector<char> passed(specs.size(), 0);
      std::mutex log_mutex;
      parallel_for(specs.size(), sweep_threads, [&](std::size_t i) {
        const auto result = run_scenario(specs[i]);
        write_run(specs[i], result, root / specs[i].name);
        const auto& s = result.summary;
        passed[i] = s.all_pass();
        rows[i] = values[i] + "," + specs[i].name + "," + to_string(s.stop) + "," + (s.all_pass() ? "true" : "false") +
                  "," + format_double(s.final.t) + "," + format_double(s.final.length) + "," +
                  format_double(s.final.energy) + "," + format_double(s.final.kosc) + "," +
                  format_double(s.final.kinf) + "," + format_double(s.wall_seconds) + "\n";
        std::lock_guard lock(log_mutex);
        std::cout << specs[i].name << ": " << to_string(s.stop) << (s.all_pass() ? " pass" : " FAIL") << "\n";
      });
      std::string csv = key + ",name,stop,all_pass,t,L,E,Kosc,kinf,wall_seconds\n";
      for (const auto& r : rows) csv += r;
      const fs::path sweep_file = root / (base_spec.name + "-sweep-" + safe(key)) / "sweep.csv";
      write_text(sweep_file, csv);
      std::cout << "output = " << sweep_file.string() << "\n";
      return std::all_of(passed.begin(), passed.end(), [](char p) { return p != 0; }) ? 0 : kExitFail;
    }
    if (*plot_cmd) {
      const fs::path traj(plot_source);
      const fs::path dir = plot_dir.empty() ? traj.parent_path() / "plots" : fs::path(plot_dir);
      for (const auto& p : emit_plots(traj, dir)) std::cout << p.string() << "\n";
      return 0;
    }
    if (*presets_cmd) {
      if (preset_name.empty()) {
        for (const auto& n : preset_names()) std::cout << n << (is_flow_preset(n) ? "  (run)" : "  (verify)") << "\n";
      } else {
        std::cout << preset_text(preset_name);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
