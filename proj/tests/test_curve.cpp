#include <doctest.h>

#include <algorithm>
#include <random>

#include "plflow/banded.hpp"
#include "plflow/curve.hpp"
#include "plflow/inequalities.hpp"
#include "plflow/stencil.hpp"
#include "plflow/suites.hpp"
#include "support.hpp"

using namespace plflow;
using namespace plflow::test;

TEST_CASE("fd_weights reproduce the classical central stencils") {
  const double h = 0.1;
  const double grid[] = {-h, 0.0, h};
  const auto d1 = fd_weights(0.0, grid, 1);
  const auto d2 = fd_weights(0.0, grid, 2);
  CHECK(d1[0] == doctest::Approx(-0.5 / h));
  CHECK(d1[1] == doctest::Approx(0.0));
  CHECK(d1[2] == doctest::Approx(0.5 / h));
  CHECK(d2[0] == doctest::Approx(1.0 / (h * h)));
  CHECK(d2[1] == doctest::Approx(-2.0 / (h * h)));
  CHECK(d2[2] == doctest::Approx(1.0 / (h * h)));

  const auto w = first_derivative_3pt(h, h);
  CHECK(w.minus == -w.plus);
  CHECK(w.centre == 0.0);

  const double small[] = {0.0, 1.0};
  CHECK(error_kind([&] { fd_weights(0.0, small, 2); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("nonuniform three-point weights are exact on quadratics") {
  const double hm = 0.07, hp = 0.13;
  const auto f = [](double x) { return 2.0 + 3.0 * x - 5.0 * x * x; };
  const auto d1 = first_derivative_3pt(hm, hp);
  const auto d2 = second_derivative_3pt(hm, hp);
  const double x0 = 0.4;
  CHECK(d1.minus * f(x0 - hm) + d1.centre * f(x0) + d1.plus * f(x0 + hp) == doctest::Approx(3.0 - 10.0 * x0));
  CHECK(d2.minus * f(x0 - hm) + d2.centre * f(x0) + d2.plus * f(x0 + hp) == doctest::Approx(-10.0));
}

TEST_CASE("curve validation") {
  CHECK(error_kind([] { validate_curve(segment(4)); }) == ErrorKind::TooFewNodes);
  Curve c = segment(16);
  c.nodes[3] = c.nodes[4];
  CHECK(error_kind([&] { validate_curve(c); }) == ErrorKind::DegenerateCurve);
  Curve g = segment(16);
  g.boundary.gap = 0.0;
  CHECK(error_kind([&] { validate_curve(g); }) == ErrorKind::InvalidArgument);
  CHECK_NOTHROW(validate_curve(segment(8)));
}

TEST_CASE("resampling a uniform segment is the identity") {
  const Curve c = segment(32);
  const Curve r = resample_uniform(c, 32);
  REQUIRE(r.nodes.size() == c.nodes.size());
  CHECK(max_displacement(c, r) <= 1e-12);
}

TEST_CASE("resampling a clustered segment equalizes the spacing") {
  Curve c;
  c.boundary.gap = 1.0;
  const std::size_t m = 200;
  for (std::size_t j = 0; j <= m; ++j) {
    const double u = static_cast<double>(j) / m;
    c.nodes.push_back({-0.5 + u * u * u, 0.0});
  }
  const Curve r = resample_uniform(c, 64);
  REQUIRE(r.nodes.size() == 65);
  CHECK(min_spacing(r) == doctest::Approx(1.0 / 64).epsilon(1e-10));
  CHECK(max_spacing(r) == doctest::Approx(1.0 / 64).epsilon(1e-10));
  CHECK(polyline_length(r) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.nodes.front() == c.nodes.front());
  CHECK(r.nodes.back() == c.nodes.back());
  CHECK(error_kind([&] { resample_uniform(c, 4); }) == ErrorKind::TooFewNodes);
}

TEST_CASE("resampling is idempotent and keeps endpoints") {
  const Curve c = resample_uniform(cosine_graph(0.2, 300), 128);
  const Curve twice = resample_uniform(c, 128);
  CHECK(max_displacement(c, twice) <= 1e-12);
  CHECK(c.nodes.front().x == -0.5);
  CHECK(c.nodes.back().x == 0.5);
  const double h = polyline_length(c) / 128;
  CHECK(max_spacing(c) - min_spacing(c) <= 1e-12 * h);
}

TEST_CASE("mirror ghosts") {
  SUBCASE("a segment continues collinearly") {
    const auto ext = reflect_extend(segment(16), 2);
    CHECK(ext.at(-1).y == 0.0);
    CHECK(ext.at(-2).y == 0.0);
    CHECK(ext.at(-1).x == doctest::Approx(-0.5 - 1.0 / 16));
    CHECK(ext.at(-2).x == doctest::Approx(-0.5 - 2.0 / 16));
    CHECK(ext.at(18).x == doctest::Approx(0.5 + 2.0 / 16));
    CHECK_FALSE(ext.left_off_line);
    CHECK_FALSE(ext.right_off_line);
  }
  SUBCASE("reflection uses the exact line and flags an off-line endpoint") {
    Curve c = segment(16);
    c.nodes.front().x += 1e-6;
    const auto ext = reflect_extend(c, 1);
    CHECK(ext.at(-1).x == 2.0 * -0.5 - c.nodes[1].x);
    CHECK(ext.left_off_line);
    CHECK_FALSE(ext.right_off_line);
  }
  CHECK(error_kind([] { reflect_extend(segment(16), 4); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("frame of a straight segment") {
  for (std::size_t n : {8u, 33u, 128u}) {
    const auto f = compute_frame(segment(n, 2.0));
    CHECK(f.length == doctest::Approx(2.0));
    CHECK(f.length_excess == doctest::Approx(0.0));
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(f.k[i] == 0.0);
      CHECK(f.ks[i] == 0.0);
    }
  }
}

TEST_CASE("frame invariants on a bent curve") {
  const Curve c = resample_uniform(cosine_graph(0.15, 400), 96);
  const auto f = compute_frame(c);
  CHECK(f.s.front() == 0.0);
  CHECK(f.s.back() == doctest::Approx(f.length));
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(std::abs(norm(f.tangent[i]) - 1.0) <= 1e-12);
    CHECK(std::abs(dot(f.tangent[i], f.normal[i])) <= 1e-12);
    CHECK(cross(f.tangent[i], f.normal[i]) == doctest::Approx(1.0));
    if (i > 0) CHECK(f.s[i] > f.s[i - 1]);
  }
}

TEST_CASE("endpoint odd derivatives vanish exactly through the reflection") {
  const Curve c = cosine_graph(0.01, 128);
  const auto f = compute_frame(c);
  CHECK(f.ks.front() == 0.0);
  CHECK(f.ks.back() == 0.0);
  CHECK(f.ksss.front() == 0.0);
  CHECK(f.ksss.back() == 0.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  Curve r = segment(64);
  for (std::size_t i = 1; i + 1 < r.nodes.size(); ++i) r.nodes[i].y = u(rng);
  const auto fr = compute_frame(r);
  CHECK(fr.ks.front() == 0.0);
  CHECK(fr.ksss.back() == 0.0);
}

TEST_CASE("graph curvature matches y'' / (1 + y'^2)^(3/2) at second order") {
  const double a = 0.01;
  const auto error = [&](std::size_t n) {
    const Curve c = cosine_graph(a, n);
    const auto f = compute_frame(c);
    double err = 0.0;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      const double x = c.nodes[i].x;
      const double arg = kPi * (x + 0.5);
      const double yp = -a * kPi * std::sin(arg), ypp = -a * kPi * kPi * std::cos(arg);
      err = std::max(err, std::abs(f.k[i] - ypp / std::pow(1.0 + yp * yp, 1.5)));
    }
    return err;
  };
  const double e64 = error(64), e128 = error(128);
  CHECK(e64 <= 1e-3 * a * kPi * kPi);
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("circle arc curvature converges at second order") {
  const double e64 = circle_arc_curvature_error(64);
  const double e128 = circle_arc_curvature_error(128);
  const double e256 = circle_arc_curvature_error(256);
  const double h64 = 2.0 * kPi / 3.0 / 64;
  CHECK(e64 <= h64 * h64);
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.2));
  CHECK(e128 / e256 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("winding number") {
  CHECK(turning_and_winding(compute_frame(segment(32))).omega_hat == 0.0);

  ExteriorCurveSpec spec;
  spec.omega = 0.5;
  spec.seed = 3;
  const Curve c = generate_exterior_curve(spec);
  const double w = turning_and_winding(compute_frame(c)).omega_hat;
  CHECK(w == doctest::Approx(0.5).epsilon(1e-4));

  Curve reversed = c;
  std::reverse(reversed.nodes.begin(), reversed.nodes.end());
  const double wf = turning_and_winding(compute_frame(c, EndpointTreatment::OneSided)).omega_hat;
  const double wr = turning_and_winding(compute_frame(reversed, EndpointTreatment::OneSided)).omega_hat;
  CHECK(wf == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(wr == doctest::Approx(-wf).epsilon(1e-12));
}

TEST_CASE("pentadiagonal LU solves diagonally dominant systems") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 50;
  PentadiagonalMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i >= 2 ? i - 2 : 0; j <= std::min(n - 1, i + 2); ++j) a.add(i, j, u(rng));
    a.add(i, i, 6.0);
  }
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  const auto b = a.multiply(x);
  const auto y = PentadiagonalLU(a).solve(b);
  for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-12));
  CHECK(error_kind([&] { a.add(0, 3, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { PentadiagonalLU(PentadiagonalMatrix(4)); }) == ErrorKind::SingularSolve);
}
