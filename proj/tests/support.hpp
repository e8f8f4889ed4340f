#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "plflow/error.hpp"
#include "plflow/geometry.hpp"

namespace plflow::test {

inline constexpr double kPi = std::numbers::pi;

/// x-uniform graph (x, f(x)) on [-gap/2, gap/2].
inline Curve graph(const std::function<double(double)>& f, std::size_t n, double gap = 1.0) {
  Curve c;
  c.boundary.gap = gap;
  for (std::size_t j = 0; j <= n; ++j) {
    const double x = -0.5 * gap + gap * static_cast<double>(j) / static_cast<double>(n);
    c.nodes.push_back({x, f(x)});
  }
  c.nodes.front().x = -0.5 * gap;
  c.nodes.back().x = 0.5 * gap;
  return c;
}

inline Curve segment(std::size_t n, double gap = 1.0) {
  return graph([](double) { return 0.0; }, n, gap);
}

/// a cos(pi (x + d/2) / d): y_x and y_xxx vanish on both lines.
inline Curve cosine_graph(double a, std::size_t n, double gap = 1.0) {
  return graph([=](double x) { return a * std::cos(kPi * (x + 0.5 * gap) / gap); }, n, gap);
}

inline double max_displacement(const Curve& a, const Curve& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) m = std::max(m, norm(a.nodes[i] - b.nodes[i]));
  return m;
}

template <class F>
ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected an Error");
}

}  // namespace plflow::test
