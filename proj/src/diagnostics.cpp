#include "plflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plflow/curve.hpp"
#include "plflow/flow.hpp"

namespace plflow {

const char* to_string(FlowKind flow) {
  return flow == FlowKind::CurveDiffusion ? "cd" : "e";
}

DiagnosticsRecord measure(const Curve& curve, FlowKind flow) {
  return measure(curve, compute_frame(curve), flow);
}

DiagnosticsRecord measure(const Curve& curve, const FrameField& frame, FlowKind flow) {
  const std::size_t n = frame.size();
  const auto w = trapezoid_weights(frame);
  const auto velocity = normal_velocity(frame, flow);

  DiagnosticsRecord r;
  r.length = frame.length;
  r.length_excess = frame.length_excess;

  double turning = 0.0, k2 = 0.0, ks2 = 0.0, kss2 = 0.0, support = 0.0, fk = 0.0;
  double kmax = 0.0, gmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = frame.k[i];
    turning += w[i] * k;
    k2 += w[i] * k * k;
    ks2 += w[i] * frame.ks[i] * frame.ks[i];
    kss2 += w[i] * frame.kss[i] * frame.kss[i];
    support += w[i] * dot(curve.nodes[i], frame.normal[i]);
    fk += w[i] * velocity[i] * k;
    kmax = std::max(kmax, std::abs(k));
    gmax = std::max(gmax, norm(curve.nodes[i]));
  }
  r.energy = k2;
  r.omega_hat = turning / (2.0 * std::numbers::pi);
  r.kbar = turning / frame.length;
  double osc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dk = frame.k[i] - r.kbar;
    osc += w[i] * dk * dk;
  }
  r.kosc = frame.length * osc;
  r.ks_l2sq = ks2;
  r.kss_l2sq = kss2;
  r.area = -0.5 * support;
  if (std::abs(r.omega_hat) >= kUndefinedIsoperimetricOmega && r.area != 0.0) {
    r.isoperimetric = frame.length * frame.length / (4.0 * r.omega_hat * std::numbers::pi * r.area);
  }
  r.gamma_sup = gmax;
  r.kinf = curve.boundary.gap * kmax;
  r.length_rate = fk;
  return r;
}

}  // namespace plflow
