#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "plflow/diagnostics.hpp"
#include "plflow/geometry.hpp"

namespace plflow {

enum class Stepping { Explicit, SemiImplicit };

enum class StopReason { Converged, CurvatureBlowup, NodeCollapse, MaxTime, NumericalFailure };

const char* to_string(Stepping stepping);
const char* to_string(StopReason reason);

enum class SnapshotPolicy { None, EveryRecord };

struct SolverConfig {
  std::size_t nodes = 256;
  Stepping stepping = Stepping::SemiImplicit;
  /// dt = cfl * h_min^4 (explicit) or cfl * h^2 * gap^2 (semi-implicit).
  /// Unset means 1/16 explicit, 0.5 semi-implicit.
  std::optional<double> cfl;
  std::size_t resample_period = 1;
  double t_max = 1.0;
  double convergence_tol = 1e-6;    ///< on gap * max|k|
  double blowup_threshold = 1e4;    ///< on gap * max|k| and gap^{3/2} * ||k_s||_2
  /// Largest turning angle (radians) a single edge may carry before the
  /// curvature is treated as having escaped the grid.
  double resolution_limit = 0.5;
  double min_spacing_fraction = 1e-4;
  /// Semi-implicit steps are also capped so that dt * max|F| stays below this
  /// fraction of the smallest edge.
  double max_displacement = 0.1;
  double record_interval = 1e-3;
  SnapshotPolicy snapshots = SnapshotPolicy::None;
  std::size_t max_steps = 50'000'000;

  double effective_cfl() const { return cfl.value_or(stepping == Stepping::Explicit ? 1.0 / 16.0 : 0.5); }

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Throws ValidationError naming the violated invariant.
void validate_config(const SolverConfig& config);

struct StepResult {
  Curve curve;
  double dt = 0.0;
};

struct StepOptions {
  bool resample = true;
};

struct Snapshot {
  double t = 0.0;
  Curve curve;
};

struct Trajectory {
  FlowKind flow = FlowKind::CurveDiffusion;
  BoundaryGeometry boundary;
  std::vector<DiagnosticsRecord> records;
  std::vector<Snapshot> snapshots;
  StopReason stop = StopReason::MaxTime;
  std::string stop_detail;
  Curve final_curve;
  std::size_t steps = 0;
  double wall_seconds = 0.0;
};

/// F at every node, endpoints through the reflected extension.
std::vector<double> normal_velocity(const FrameField& frame, FlowKind flow);

/// gamma <- gamma - dt F nu, endpoints projected back onto their lines.
StepResult step_explicit(const Curve& curve, FlowKind flow, double dt, StepOptions options = {});

/// (I + dt D4) (gamma_new - gamma_old) = -dt F nu per coordinate, with D4 the
/// five-point fourth arclength derivative closed by mirror ghosts and frozen at
/// the old metric. The stiff part of F cancels against D4 at the linear level,
/// so the step is stable for any dt and agrees with step_explicit to O(dt^2).
StepResult step_semi_implicit(const Curve& curve, FlowKind flow, double dt, StepOptions options = {});

/// Explicit stability limit dt = cfl * h_min^4 for the current curve.
double explicit_time_step(const Curve& curve, double cfl);

/// Advances until a stop reason fires.
Trajectory run(const Curve& initial, FlowKind flow, const SolverConfig& config);

}  // namespace plflow
