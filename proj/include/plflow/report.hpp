#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plflow/checks.hpp"
#include "plflow/scenario.hpp"

namespace plflow {

/// One requested check after evaluation.
struct CheckVerdict {
  std::string check;     ///< token from the scenario, e.g. non-increasing:Kosc
  std::string identity;  ///< the relation being tested, as a formula
  bool pass = false;
  double worst = 0.0;
  double slack = 0.0;
  std::optional<double> time;  ///< record time of the worst case
  std::string note;
};

struct NamedRate {
  std::string field;
  RateFit fit;
};

struct SummaryReport {
  std::string name;
  FlowKind flow = FlowKind::CurveDiffusion;
  StopReason stop = StopReason::MaxTime;
  std::string stop_detail;
  DiagnosticsRecord initial;
  DiagnosticsRecord final;
  std::size_t steps = 0;
  std::vector<CheckVerdict> checks;
  std::vector<NamedRate> rates;
  double wall_seconds = 0.0;

  bool all_pass() const;
};

/// Evaluates every check token of the spec; failures inside a check become a
/// failing verdict carrying the error text.
SummaryReport evaluate(const ScenarioSpec& spec, const Trajectory& traj);

struct ScenarioRun {
  Curve initial;
  Trajectory trajectory;
  SummaryReport summary;
};

ScenarioRun run_scenario(const ScenarioSpec& spec);

/// key = value lines: stop reason, final diagnostics, rates and verdicts.
std::string summary_text(const SummaryReport& report);
/// One block per check with its identity, verdict, worst residual and time.
std::string verification_text(const std::vector<CheckVerdict>& checks);

/// scenario.txt, initial.csv, final.csv, trajectory.csv, summary.txt,
/// report.txt and snapshots/ under `dir`.
void write_run(const ScenarioSpec& spec, const ScenarioRun& run, const std::filesystem::path& dir);

}  // namespace plflow
