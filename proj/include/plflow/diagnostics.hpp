#pragma once

#include <optional>

#include "plflow/geometry.hpp"

namespace plflow {

enum class FlowKind {
  CurveDiffusion,  ///< F = k_ss
  Elastic,         ///< F = k_ss + k^3 / 2
};

const char* to_string(FlowKind flow);

/// One time slice of every monitored functional.
struct DiagnosticsRecord {
  double t = 0.0;
  double length = 0.0;
  double energy = 0.0;      ///< integral of k^2
  double kosc = 0.0;        ///< L * integral of (k - kbar)^2
  double omega_hat = 0.0;   ///< integral of k / 2 pi
  double kbar = 0.0;
  double ks_l2sq = 0.0;
  double kss_l2sq = 0.0;
  double area = 0.0;        ///< -1/2 integral of <gamma, nu>
  std::optional<double> isoperimetric;  ///< L^2 / (4 omega pi A); absent when omega is ~0
  double gamma_sup = 0.0;
  double kinf = 0.0;        ///< gap * max |k| (dimensionless)

  // Not part of the trajectory file format.
  double length_excess = 0.0;  ///< L - gap without cancellation
  double length_rate = 0.0;    ///< integral of F k, the predicted dL/dt
};

inline constexpr double kUndefinedIsoperimetricOmega = 1e-3;

/// Evaluates every functional by trapezoidal quadrature on the reflected frame.
DiagnosticsRecord measure(const Curve& curve, FlowKind flow);
DiagnosticsRecord measure(const Curve& curve, const FrameField& frame, FlowKind flow);

}  // namespace plflow
