#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "plflow/geometry.hpp"

namespace plflow {

/// Resample onto n+1 nodes with equal chord lengths along the input polyline.
/// Endpoints are preserved exactly.
Curve resample_uniform(const Curve& curve, std::size_t n);

/// Node list with `depth` mirror ghosts prepended and appended.
struct ExtendedNodes {
  std::vector<Vec2> nodes;  ///< nodes[depth + i] is gamma_i
  std::size_t depth = 0;
  bool left_off_line = false;
  bool right_off_line = false;

  const Vec2& at(long i) const { return nodes[static_cast<std::size_t>(i + static_cast<long>(depth))]; }
};

inline constexpr double kOffLineTolerance = 1e-9;

/// Mirrors gamma_1..gamma_depth across x = -d/2 and gamma_{N-1}..gamma_{N-depth}
/// across x = +d/2 (always across the exact line, never through the endpoint).
ExtendedNodes reflect_extend(const Curve& curve, std::size_t depth);

enum class EndpointTreatment {
  /// Even extension through mirror ghosts; the free boundary conditions hold by construction.
  Reflect,
  /// Shifted one-sided stencils; for polylines that are not meant to meet the lines.
  OneSided,
};

/// Tangent, normal, curvature and its first four arclength derivatives.
///
/// Curvature at a node is the turning angle between adjacent edges divided by
/// the dual edge length, so the trapezoidal integral of k is exactly the total
/// turning of the (reflected) polyline.
FrameField compute_frame(const Curve& curve, EndpointTreatment treatment = EndpointTreatment::Reflect);

struct Winding {
  double total_turning = 0.0;  ///< trapezoidal integral of k ds
  double omega_hat = 0.0;      ///< total_turning / 2 pi
};

Winding turning_and_winding(const FrameField& frame);

/// Trapezoidal weights on the node arclengths.
std::vector<double> trapezoid_weights(const FrameField& frame);
double integrate(const FrameField& frame, std::span<const double> values);

double max_spacing(const Curve& curve);
double min_spacing(const Curve& curve);
double polyline_length(const Curve& curve);

}  // namespace plflow
