#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plflow/checks.hpp"
#include "plflow/flow.hpp"

namespace plflow {

enum class GeneratorKind { PerturbedSegment, Exterior, LemniscateLobe, File };

const char* to_string(GeneratorKind kind);

/// Initial-data generator and its parameters. Only the fields of the selected
/// kind are read; the rest keep their defaults.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::PerturbedSegment;
  // perturbed-segment: y = sum_m a_m cos(m pi (x + d/2) / d)
  double amplitude = 0.01;  ///< length (segment) or radians (exterior)
  std::vector<int> modes{1};
  std::uint64_t seed = 0;
  std::optional<double> target_product;  ///< requested L0 * E0, dimensionless
  double amplitude_cap = 0.2;            ///< fraction of the gap
  // exterior
  double omega = 0.5;
  // lemniscate-lobe
  double scale = 0.9;     ///< fraction of the parameter interval carrying the lobes
  double turning = 6.5;   ///< peak tangent angle, radians
  // file
  std::string path;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// Tolerances for the requested checks.
struct CheckSettings {
  Slack monotone{};
  std::size_t identity_skip = 10;
  double length_tolerance = 0.05;
  double winding_tolerance = 1e-6;
  double kbar_tolerance = 0.10;
  double kosc_tolerance = 0.10;
  double envelope_slack = 0.10;
  std::optional<double> expected_rate;  ///< 1 / time
  double rate_tolerance = 0.20;
  double min_rate_quality = 0.99;
  double rate_window = 0.5;

  friend bool operator==(const CheckSettings&, const CheckSettings&) = default;
};

/// Tokens: stop=<reason>, non-increasing:<field>, strictly-decreasing:<field>,
/// length-identity, winding, kosc-evolution, time-integral, decay-envelope,
/// rate:<field>, boundary-parity.
struct ScenarioSpec {
  std::string name;
  FlowKind flow = FlowKind::CurveDiffusion;
  double gap = 1.0;
  GeneratorSpec generator;
  SolverConfig solver;
  std::vector<std::string> checks;
  CheckSettings settings;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Parses the key = value format; `#` starts a comment. Throws ParseError with
/// the line number or ValidationError naming the violated invariant.
ScenarioSpec parse_scenario(std::string_view text);

/// Canonical text; parse_scenario(render(spec)) == spec.
std::string render(const ScenarioSpec& spec);

/// Throws ValidationError.
void validate_scenario(const ScenarioSpec& spec);

/// Replaces or appends `key = value` in scenario text.
std::string override_key(std::string_view text, std::string_view key, std::string_view value);

/// Curve for the spec's generator, resampled to the solver node count.
/// Throws TargetUnreachable, ClosureFailed, ValidationError.
Curve generate_initial(const ScenarioSpec& spec);

/// Tangent angle turning * sin^4(pi v) on the centred window v in [0, 1] of
/// width `scale`, closed horizontally between the lines.
Curve lemniscate_lobe(double gap, double scale, double turning, std::size_t nodes);

/// Graph of sum_m a_m cos(m pi (x + d/2) / d).
Curve perturbed_segment(double gap, const std::vector<int>& modes, const std::vector<double>& amplitudes,
                        std::size_t nodes);

std::vector<std::string> preset_names();
bool is_flow_preset(std::string_view name);
/// Scenario text of a bundled flow preset; throws InvalidArgument for unknown names.
std::string preset_text(std::string_view name);

}  // namespace plflow
