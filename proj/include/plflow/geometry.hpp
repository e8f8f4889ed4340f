#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace plflow {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
/// Counter-clockwise quarter turn.
inline Vec2 rotate_ccw(const Vec2& a) { return {-a.y, a.x}; }

/// Two vertical supporting lines at x = -gap/2 and x = +gap/2.
struct BoundaryGeometry {
  double gap = 1.0;

  double left_x() const { return -0.5 * gap; }
  double right_x() const { return 0.5 * gap; }
  /// Mirror of p across the left (side < 0) or right (side > 0) line.
  Vec2 mirror(const Vec2& p, int side) const {
    const double line = side < 0 ? left_x() : right_x();
    return {2.0 * line - p.x, p.y};
  }

  friend bool operator==(const BoundaryGeometry&, const BoundaryGeometry&) = default;
};

/// Open polyline gamma_0..gamma_N with endpoints on the supporting lines.
struct Curve {
  std::vector<Vec2> nodes;
  BoundaryGeometry boundary;

  std::size_t segments() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

inline constexpr std::size_t kMinSegments = 8;

/// Throws TooFewNodes / DegenerateCurve / InvalidArgument when the curve is unusable.
void validate_curve(const Curve& curve);

/// Largest distance of an endpoint from its supporting line.
double endpoint_offset(const Curve& curve);

/// Differential geometry sampled at the nodes of a curve.
struct FrameField {
  std::vector<Vec2> tangent;
  std::vector<Vec2> normal;  ///< counter-clockwise rotation of the tangent
  std::vector<double> k;
  std::vector<double> ks;
  std::vector<double> kss;
  std::vector<double> ksss;
  std::vector<double> kssss;
  std::vector<double> s;  ///< cumulative chord arclength, s[0] = 0, s[N] = L
  double length = 0.0;
  /// Length minus the gap, accumulated edge by edge without cancellation.
  double length_excess = 0.0;

  std::size_t size() const { return k.size(); }
};

}  // namespace plflow
