#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plflow/flow.hpp"

namespace plflow {

/// Outcome of one identity, monotonicity or envelope check over a trajectory.
struct MonotonicityReport {
  std::string quantity;
  double worst_violation = 0.0;  ///< signed; compare against slack
  double worst_time = 0.0;
  std::optional<double> first_violation_time;
  double slack = 0.0;
  bool verdict = true;
};

struct Slack {
  double absolute = 1e-10;
  double relative = 1e-3;  ///< of the initial value

  friend bool operator==(const Slack&, const Slack&) = default;
};

/// Record fields by trajectory column name (t, L, E, Kosc, omega_hat, kbar,
/// ks_l2sq, kss_l2sq, area, isoper, gamma_sup, kinf).
double record_field(const DiagnosticsRecord& record, std::string_view field);
bool is_record_field(std::string_view field);

/// Largest increase of a field between consecutive records. With strict set the
/// verdict additionally requires every step to decrease.
MonotonicityReport check_non_increasing(const Trajectory& traj, std::string_view field, Slack slack = {},
                                        bool strict = false);

/// Centered-difference dL/dt against -||k_s||^2 (CD) or the integral of F k (E);
/// worst relative residual over interior records after `skip` leading ones.
MonotonicityReport check_length_identity(const Trajectory& traj, std::size_t skip = 0,
                                         double tolerance = 0.05);

struct WindingReport {
  MonotonicityReport winding;  ///< max |omega_hat(t) - omega_hat(0)|
  /// CD: dkbar/dt against 2 omega pi |k_s|^2 / L^2 when omega is nonzero,
  /// otherwise gap * max |kbar|. E: gap * max |kbar - kbar(0)| is reported only.
  MonotonicityReport kbar;
  bool verdict() const { return winding.verdict && kbar.verdict; }
};

WindingReport check_winding_and_kbar(const Trajectory& traj, double winding_tolerance = 1e-6,
                                     double kbar_tolerance = 0.10, double kbar_zero_tolerance = 1e-8);

/// dK_osc/dt + K_osc |k_s|^2 / L + 2 L |k_ss|^2
///   = 3 L int (k - kbar)^2 k_s^2 + 6 kbar L int (k - kbar) k_s^2 + 2 kbar^2 L |k_s|^2,
/// residual relative to 2 L |k_ss|^2. Needs a snapshot at every record.
MonotonicityReport check_kosc_evolution(const Trajectory& traj, std::size_t skip = 0, double tolerance = 0.10);

/// Trapezoidal time integral of K_osc against L(0)^4 / 4 pi^2 (strict).
MonotonicityReport check_time_integral_bound(const Trajectory& traj);

inline constexpr double kDecayEnvelopeThreshold = 4.0 * 3.14159265358979323846 / 7.0;

/// |k_s|^2(t) <= 3 L0^2 K1 / (K1 t + 3 L0^2), worst relative excess against `slack`.
MonotonicityReport check_decay_envelope(const Trajectory& traj, double slack = 0.10);

struct RateFit {
  double rate = 0.0;     ///< decay rate: field ~ exp(-rate t)
  double quality = 0.0;  ///< coefficient of determination
  std::size_t points = 0;
};

/// Least squares of log(field) against t over the trailing `window` fraction of records.
RateFit fit_exponential_rate(const Trajectory& traj, std::string_view field, double window = 0.5);
RateFit fit_exponential_rate(const std::vector<double>& t, const std::vector<double>& values);

/// Endpoint odd derivatives of every snapshot; worst absolute value.
MonotonicityReport check_boundary_parity(const Trajectory& traj);

}  // namespace plflow
