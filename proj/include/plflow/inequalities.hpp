#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "plflow/diagnostics.hpp"
#include "plflow/geometry.hpp"

namespace plflow {

/// Samples f_0..f_N on the uniform grid s_j = j L / N.
struct SampledFunction {
  std::vector<double> values;
  double length = 1.0;

  std::size_t intervals() const { return values.empty() ? 0 : values.size() - 1; }
  double spacing() const { return length / static_cast<double>(intervals()); }
};

inline constexpr std::size_t kMinSampleIntervals = 16;

SampledFunction sample(const std::function<double(double)>& f, double length, std::size_t intervals);

enum class PoincareVariant { MeanZero, Dirichlet };

const char* to_string(PoincareVariant variant);

/// Trapezoidal integral of f^2 over the edge-midpoint integral of f_s^2.
/// Throws ZeroFunction, HypothesisNotMet (mean not zero / endpoints not zero).
double poincare_ratio(const SampledFunction& f, PoincareVariant variant);

/// L^2 / pi^2.
double poincare_bound(double length);

/// Slack factor for the discrete ratio against poincare_bound: 1 + 5 (h/L)^2.
double poincare_tolerance(const SampledFunction& f);

/// max f^2 divided by (L/pi) |f_s|^2 (dirichlet) or (2L/pi) |f_s|^2 (mean zero).
double sup_bound_ratio(const SampledFunction& f, PoincareVariant variant);

/// Truncated trigonometric series with coefficients of size ~ m^-3, admissible
/// for the given variant (trapezoidal mean removed, or exact zeros at both ends).
SampledFunction random_admissible_function(std::mt19937_64& rng, PoincareVariant variant, double length,
                                           std::size_t intervals, int modes = 12);

/// Per-sample seed derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct ExteriorCurveSpec {
  double omega = 0.5;  ///< nonzero multiple of 1/2
  double gap = 1.0;
  std::uint64_t seed = 0;
  double amplitude = 0.3;  ///< radians, scale of the tangent-angle perturbation
  int modes = 4;
  std::size_t nodes = 512;
  int max_attempts = 200;
  /// Draws whose mean horizontal tangent component falls below this are rejected.
  double min_closure = 0.05;
};

/// Quintic smoothstep 6u^5 - 15u^4 + 10u^3.
double smoothstep5(double u);

/// Tangent angle 2 omega pi B(u) + sum c_m sin(m pi u), length fixed by the horizontal
/// closure, integrated and resampled. Throws InvalidWinding or ClosureFailed.
Curve generate_exterior_curve(const ExteriorCurveSpec& spec);

struct CorollaryGap {
  double omega = 0.0;  ///< omega_hat rounded to the nearest half
  double lhs = 0.0;    ///< K_osc + 8 pi^2 log(L / gap)
  double rhs = 0.0;
  double gap = 0.0;    ///< lhs - rhs
};

/// Closed-form lower bound (12 pi^2 w^2 + pi - 2 w pi sqrt(6 pi (6 pi w^2 + 1))) / 3 at w = |omega|.
double exterior_lower_bound(double omega);

/// Throws HypothesisNotMet when |omega_hat| < 1/4.
CorollaryGap corollary_gap(const Curve& curve);

struct LinearizationResult {
  std::vector<double> epsilons;
  std::vector<double> residuals;  ///< max |F - eps eta_xxxx|
  double slope = 0.0;             ///< log-log slope of residual against eps
};

/// eta sampled on [-gap/2, gap/2]; eta_x and eta_xxx must vanish at both ends.
/// Builds the graphs (x, eps eta(x)) on the sample grid and compares the discrete
/// normal velocity with eps eta_xxxx. Throws HypothesisNotMet.
LinearizationResult linearization_residual(const SampledFunction& eta, const std::vector<double>& epsilons,
                                           FlowKind flow);

/// Endpoint odd derivatives through the mirror extension, plus a one-sided audit
/// that exposes non-compliant endpoints.
struct ParityAudit {
  double ks_left = 0.0, ks_right = 0.0;
  double ksss_left = 0.0, ksss_right = 0.0;
  double one_sided_ks_left = 0.0, one_sided_ks_right = 0.0;
  double tilt_left = 0.0, tilt_right = 0.0;  ///< direction angle of the first and last edge, radians

  double max_reflected() const;
  double max_one_sided() const;
};

ParityAudit boundary_parity_check(const Curve& curve);

}  // namespace plflow
