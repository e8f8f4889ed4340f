#include "plflow/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "plflow/error.hpp"
#include "plflow/stencil.hpp"

namespace plflow {

void validate_curve(const Curve& curve) {
  if (!(curve.boundary.gap > 0.0) || !std::isfinite(curve.boundary.gap)) {
    throw Error(ErrorKind::InvalidArgument, "gap must be positive");
  }
  if (curve.segments() < kMinSegments) {
    throw Error(ErrorKind::TooFewNodes,
                "curve has " + std::to_string(curve.segments()) + " segments, need at least 8");
  }
  for (const Vec2& p : curve.nodes) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::NumericalFailure, "non-finite node coordinate");
    }
  }
  for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i) {
    if (curve.nodes[i + 1] == curve.nodes[i]) {
      throw Error(ErrorKind::DegenerateCurve, "nodes " + std::to_string(i) + " and " +
                                                  std::to_string(i + 1) + " coincide");
    }
  }
}

double endpoint_offset(const Curve& curve) {
  if (curve.nodes.empty()) return 0.0;
  return std::max(std::abs(curve.nodes.front().x - curve.boundary.left_x()),
                  std::abs(curve.nodes.back().x - curve.boundary.right_x()));
}

double max_spacing(const Curve& curve) {
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i) {
    h = std::max(h, norm(curve.nodes[i + 1] - curve.nodes[i]));
  }
  return h;
}

double min_spacing(const Curve& curve) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i) {
    h = std::min(h, norm(curve.nodes[i + 1] - curve.nodes[i]));
  }
  return h;
}

double polyline_length(const Curve& curve) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i) {
    len += norm(curve.nodes[i + 1] - curve.nodes[i]);
  }
  return len;
}

namespace {

// Position on a polyline continued past its last node by a straight ray.
struct Cursor {
  std::size_t seg = 0;  // == number of segments when on the continuation ray
  double t = 0.0;       // segment parameter in [0,1], or distance along the ray
  Vec2 p;
};

class ChordMarcher {
 public:
  explicit ChordMarcher(const std::vector<Vec2>& pts) : pts_(pts) {
    const std::size_t m = pts.size() - 1;
    cum_.assign(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) cum_[i + 1] = cum_[i] + norm(pts[i + 1] - pts[i]);
    const Vec2 last = pts[m] - pts[m - 1];
    ray_dir_ = (1.0 / norm(last)) * last;
  }

  double total() const { return cum_.back(); }

  // Larger root of |f + t d| = c for a start point strictly inside the ball.
  static double exit_parameter(const Vec2& f, const Vec2& d, double c) {
    const double a = dot(d, d);
    const double b = 2.0 * dot(f, d);
    const double cc = dot(f, f) - c * c;
    const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * a * cc));
    if (b < 0.0) return (-b + disc) / (2.0 * a);
    return (b + disc) > 0.0 ? (-2.0 * cc) / (b + disc) : 0.0;
  }

  // First point beyond `cur` whose distance from cur.p equals c.
  Cursor march(const Cursor& cur, double c) const {
    const std::size_t m = pts_.size() - 1;
    for (std::size_t seg = cur.seg; seg < m; ++seg) {
      const Vec2& a = pts_[seg];
      const Vec2& b = pts_[seg + 1];
      if (norm(b - cur.p) >= c) {
        const double t = std::clamp(exit_parameter(a - cur.p, b - a, c), 0.0, 1.0);
        return {seg, t, a + t * (b - a)};
      }
    }
    const Vec2& a = pts_[m];
    const double t = std::max(0.0, exit_parameter(a - cur.p, ray_dir_, c));
    return {m, t, a + t * ray_dir_};
  }

  double arclength(const Cursor& cur) const {
    const std::size_t m = pts_.size() - 1;
    if (cur.seg >= m) return cum_[m] + cur.t;
    return cum_[cur.seg] + cur.t * (cum_[cur.seg + 1] - cum_[cur.seg]);
  }

  // Arclength reached after n marches of chord c, minus the polyline length.
  double overshoot(double c, std::size_t n) const {
    Cursor cur{0, 0.0, pts_.front()};
    for (std::size_t j = 0; j < n; ++j) cur = march(cur, c);
    return arclength(cur) - total();
  }

 private:
  const std::vector<Vec2>& pts_;
  std::vector<double> cum_;
  Vec2 ray_dir_;
};

}  // namespace

Curve resample_uniform(const Curve& curve, std::size_t n) {
  if (n < kMinSegments) {
    throw Error(ErrorKind::TooFewNodes, "resample target " + std::to_string(n) + " is below 8");
  }
  if (curve.nodes.size() < 2) throw Error(ErrorKind::TooFewNodes, "curve has fewer than 2 nodes");
  for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i) {
    if (curve.nodes[i + 1] == curve.nodes[i]) {
      throw Error(ErrorKind::DegenerateCurve, "nodes " + std::to_string(i) + " and " +
                                                  std::to_string(i + 1) + " coincide");
    }
  }

  const ChordMarcher marcher(curve.nodes);
  const auto f = [&](double c) { return marcher.overshoot(c, n); };

  double hi = marcher.total() / static_cast<double>(n);
  double fhi = f(hi);
  for (int k = 0; fhi < 0.0 && k < 60; ++k) {
    hi *= 1.0 + 1e-12 * std::ldexp(1.0, k);
    fhi = f(hi);
  }
  double lo = hi * (1.0 - 1e-6);
  double flo = f(lo);
  for (int k = 0; flo > 0.0 && k < 60; ++k) {
    lo = hi - 2.0 * (hi - lo);
    if (lo <= 0.0) lo = 0.5 * hi * std::ldexp(1.0, -k);
    flo = f(lo);
  }
  if (flo > 0.0 || fhi < 0.0) {
    throw Error(ErrorKind::NumericalFailure, "could not bracket the resampling chord");
  }

  double chord = hi;
  if (fhi != 0.0 && flo != 0.0) {
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
    chord = 0.5 * (bracket.first + bracket.second);
  } else if (flo == 0.0) {
    chord = lo;
  }

  Curve out;
  out.boundary = curve.boundary;
  out.nodes.reserve(n + 1);
  out.nodes.push_back(curve.nodes.front());
  Cursor cur{0, 0.0, curve.nodes.front()};
  for (std::size_t j = 1; j < n; ++j) {
    cur = marcher.march(cur, chord);
    out.nodes.push_back(cur.p);
  }
  out.nodes.push_back(curve.nodes.back());
  return out;
}

ExtendedNodes reflect_extend(const Curve& curve, std::size_t depth) {
  if (depth < 1 || depth > 3) throw Error(ErrorKind::InvalidArgument, "ghost depth must be 1, 2 or 3");
  validate_curve(curve);
  const auto& nodes = curve.nodes;
  const std::size_t n = curve.segments();

  ExtendedNodes ext;
  ext.depth = depth;
  ext.nodes.reserve(nodes.size() + 2 * depth);
  for (std::size_t j = depth; j >= 1; --j) ext.nodes.push_back(curve.boundary.mirror(nodes[j], -1));
  ext.nodes.insert(ext.nodes.end(), nodes.begin(), nodes.end());
  for (std::size_t j = 1; j <= depth; ++j) ext.nodes.push_back(curve.boundary.mirror(nodes[n - j], +1));

  ext.left_off_line = std::abs(nodes.front().x - curve.boundary.left_x()) > kOffLineTolerance;
  ext.right_off_line = std::abs(nodes.back().x - curve.boundary.right_x()) > kOffLineTolerance;
  return ext;
}

namespace {

double turning_angle(const Vec2& in, const Vec2& out) {
  return std::atan2(cross(in, out), dot(in, out));
}

// |e| - e.x without cancellation for nearly horizontal edges.
double edge_excess(const Vec2& e, double len) {
  if (e.x > 0.0) return (e.y * e.y) / (len + e.x);
  return len - e.x;
}

// Centred three-point derivative of an even field; hm[i], hp[i] are the
// spacings to the left and right neighbours of node i (ghosts mirrored).
std::vector<double> centred_even(const std::vector<double>& f, const std::vector<double>& hm,
                                 const std::vector<double>& hp, int order) {
  const std::size_t n = f.size() - 1;
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i <= n; ++i) {
    const double fm = i == 0 ? f[1] : f[i - 1];
    const double fp = i == n ? f[n - 1] : f[i + 1];
    const ThreePoint w = order == 1 ? first_derivative_3pt(hm[i], hp[i]) : second_derivative_3pt(hm[i], hp[i]);
    out[i] = w.minus * fm + w.centre * f[i] + w.plus * fp;
  }
  return out;
}

std::vector<double> one_sided(const std::vector<double>& f, const std::vector<double>& s,
                              const std::vector<double>& hm, const std::vector<double>& hp,
                              int order) {
  const std::size_t n = f.size() - 1;
  std::vector<double> out(f.size());
  for (std::size_t i = 1; i < n; ++i) {
    const ThreePoint w = order == 1 ? first_derivative_3pt(hm[i], hp[i]) : second_derivative_3pt(hm[i], hp[i]);
    out[i] = w.minus * f[i - 1] + w.centre * f[i] + w.plus * f[i + 1];
  }
  const double left[3] = {s[0], s[1], s[2]};
  const auto wl = fd_weights(s[0], left, order);
  out[0] = wl[0] * f[0] + wl[1] * f[1] + wl[2] * f[2];
  const double right[3] = {s[n - 2], s[n - 1], s[n]};
  const auto wr = fd_weights(s[n], right, order);
  out[n] = wr[0] * f[n - 2] + wr[1] * f[n - 1] + wr[2] * f[n];
  return out;
}

}  // namespace

FrameField compute_frame(const Curve& curve, EndpointTreatment treatment) {
  validate_curve(curve);
  const auto& p = curve.nodes;
  const std::size_t n = curve.segments();

  std::vector<Vec2> edge(n);
  std::vector<double> h(n);
  FrameField fr;
  fr.s.assign(n + 1, 0.0);
  double excess = (p[n].x - p[0].x) - curve.boundary.gap;
  for (std::size_t j = 0; j < n; ++j) {
    edge[j] = p[j + 1] - p[j];
    h[j] = norm(edge[j]);
    fr.s[j + 1] = fr.s[j] + h[j];
    excess += edge_excess(edge[j], h[j]);
  }
  fr.length = fr.s[n];
  fr.length_excess = excess;

  // Spacing on either side of each node; the ghost spacing mirrors the first/last edge.
  std::vector<double> hm(n + 1), hp(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    hm[i] = i == 0 ? h[0] : h[i - 1];
    hp[i] = i == n ? h[n - 1] : h[i];
  }

  fr.tangent.resize(n + 1);
  fr.normal.resize(n + 1);
  fr.k.resize(n + 1);

  for (std::size_t i = 1; i < n; ++i) {
    const Vec2 chord = p[i + 1] - p[i - 1];
    fr.tangent[i] = (1.0 / norm(chord)) * chord;
    fr.k[i] = 2.0 * turning_angle(edge[i - 1], edge[i]) / (h[i - 1] + h[i]);
  }

  if (treatment == EndpointTreatment::Reflect) {
    const Vec2 ghost_left = curve.boundary.mirror(p[1], -1);
    const Vec2 ghost_right = curve.boundary.mirror(p[n - 1], +1);
    const Vec2 c0 = p[1] - ghost_left;
    const Vec2 cn = ghost_right - p[n - 1];
    fr.tangent[0] = (1.0 / norm(c0)) * c0;
    fr.tangent[n] = (1.0 / norm(cn)) * cn;
    fr.k[0] = turning_angle(p[0] - ghost_left, edge[0]) / h[0];
    fr.k[n] = turning_angle(edge[n - 1], ghost_right - p[n]) / h[n - 1];

    fr.ks = centred_even(fr.k, hm, hp, 1);
    fr.kss = centred_even(fr.k, hm, hp, 2);
    fr.ksss = centred_even(fr.kss, hm, hp, 1);
    fr.kssss = centred_even(fr.kss, hm, hp, 2);
  } else {
    fr.tangent[0] = (1.0 / h[0]) * edge[0];
    fr.tangent[n] = (1.0 / h[n - 1]) * edge[n - 1];
    fr.k[0] = fr.k[1] + (fr.k[1] - fr.k[2]) * h[0] / h[1];
    fr.k[n] = fr.k[n - 1] + (fr.k[n - 1] - fr.k[n - 2]) * h[n - 1] / h[n - 2];

    fr.ks = one_sided(fr.k, fr.s, hm, hp, 1);
    fr.kss = one_sided(fr.k, fr.s, hm, hp, 2);
    fr.ksss = one_sided(fr.kss, fr.s, hm, hp, 1);
    fr.kssss = one_sided(fr.kss, fr.s, hm, hp, 2);
  }

  for (std::size_t i = 0; i <= n; ++i) fr.normal[i] = rotate_ccw(fr.tangent[i]);
  return fr;
}

std::vector<double> trapezoid_weights(const FrameField& frame) {
  const std::size_t n = frame.size() - 1;
  std::vector<double> w(n + 1);
  w[0] = 0.5 * (frame.s[1] - frame.s[0]);
  w[n] = 0.5 * (frame.s[n] - frame.s[n - 1]);
  for (std::size_t i = 1; i < n; ++i) w[i] = 0.5 * (frame.s[i + 1] - frame.s[i - 1]);
  return w;
}

double integrate(const FrameField& frame, std::span<const double> values) {
  const auto w = trapezoid_weights(frame);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * values[i];
  return sum;
}

Winding turning_and_winding(const FrameField& frame) {
  Winding out;
  out.total_turning = integrate(frame, frame.k);
  out.omega_hat = out.total_turning / (2.0 * std::numbers::pi);
  return out;
}

}  // namespace plflow
