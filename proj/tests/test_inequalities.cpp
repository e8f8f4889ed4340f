#include <doctest.h>

#include "plflow/curve.hpp"
#include "plflow/inequalities.hpp"
#include "plflow/suites.hpp"
#include "support.hpp"

using namespace plflow;
using namespace plflow::test;

TEST_CASE("sharp Poincare cases") {
  const auto c = sample([](double s) { return std::cos(kPi * s); }, 1.0, 1024);
  CHECK(poincare_ratio(c, PoincareVariant::MeanZero) == doctest::Approx(1.0 / (kPi * kPi)).epsilon(0.005));

  auto s = sample([](double x) { return std::sin(kPi * x); }, 1.0, 1024);
  s.values.back() = 0.0;
  CHECK(poincare_ratio(s, PoincareVariant::Dirichlet) == doctest::Approx(1.0 / (kPi * kPi)).epsilon(0.005));

  const double len = 1.7;
  const auto c2 = sample([=](double x) { return std::cos(2.0 * kPi * x / len); }, len, 1024);
  const double r2 = poincare_ratio(c2, PoincareVariant::MeanZero);
  CHECK(r2 == doctest::Approx(len * len / (4.0 * kPi * kPi)).epsilon(0.005));
  CHECK(r2 < poincare_bound(len));
}

TEST_CASE("Poincare hypotheses and degenerate input") {
  const auto zero = sample([](double) { return 0.0; }, 1.0, 64);
  CHECK(error_kind([&] { poincare_ratio(zero, PoincareVariant::MeanZero); }) == ErrorKind::ZeroFunction);
  const auto offset = sample([](double s) { return 1.0 + std::cos(kPi * s); }, 1.0, 64);
  CHECK(error_kind([&] { poincare_ratio(offset, PoincareVariant::MeanZero); }) == ErrorKind::HypothesisNotMet);
  const auto cosine = sample([](double s) { return std::cos(kPi * s); }, 1.0, 64);
  CHECK(error_kind([&] { poincare_ratio(cosine, PoincareVariant::Dirichlet); }) == ErrorKind::HypothesisNotMet);
  const auto coarse = sample([](double s) { return std::cos(kPi * s); }, 1.0, kMinSampleIntervals - 1);
  CHECK(error_kind([&] { poincare_ratio(coarse, PoincareVariant::MeanZero); }) == ErrorKind::TooFewNodes);
}

TEST_CASE("sup-norm bound") {
  auto s = sample([](double x) { return std::sin(kPi * x); }, 1.0, 1024);
  s.values.back() = 0.0;
  const double r = sup_bound_ratio(s, PoincareVariant::Dirichlet);
  CHECK(r <= 1.0);
  CHECK(r == doctest::Approx(2.0 / kPi).epsilon(1e-3));
}

TEST_CASE("random admissible functions respect both inequalities") {
  for (auto variant : {PoincareVariant::MeanZero, PoincareVariant::Dirichlet}) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      std::mt19937_64 rng(derive_seed(99, i));
      const double len = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
      const auto f = random_admissible_function(rng, variant, len, 256);
      CHECK(poincare_ratio(f, variant) <= poincare_bound(len) * poincare_tolerance(f));
      CHECK(sup_bound_ratio(f, variant) <= poincare_tolerance(f));
    }
  }
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("exterior curve construction") {
  SUBCASE("unperturbed half turn cannot close horizontally") {
    ExteriorCurveSpec spec;
    spec.omega = 0.5;
    spec.amplitude = 0.0;
    CHECK(error_kind([&] { generate_exterior_curve(spec); }) == ErrorKind::ClosureFailed);
  }
  SUBCASE("total turning is 2 omega pi with endpoints on the lines") {
    for (double omega : {0.5, 1.0, -0.5}) {
      ExteriorCurveSpec spec;
      spec.omega = omega;
      spec.seed = 17;
      const Curve c = generate_exterior_curve(spec);
      const auto w = turning_and_winding(compute_frame(c));
      CHECK(w.total_turning == doctest::Approx(2.0 * omega * kPi).epsilon(1e-4));
      CHECK(endpoint_offset(c) == 0.0);
      CHECK(c.nodes.size() == spec.nodes + 1);
    }
  }
  SUBCASE("unperturbed full turn closes") {
    ExteriorCurveSpec spec;
    spec.omega = 1.0;
    spec.amplitude = 0.0;
    const Curve c = generate_exterior_curve(spec);
    CHECK(turning_and_winding(compute_frame(c)).omega_hat == doctest::Approx(1.0).epsilon(1e-4));
  }
  SUBCASE("winding must be a nonzero half-integer") {
    for (double omega : {0.0, 0.3}) {
      ExteriorCurveSpec spec;
      spec.omega = omega;
      CHECK(error_kind([&] { generate_exterior_curve(spec); }) == ErrorKind::InvalidWinding);
    }
  }
  SUBCASE("identical seeds give identical curves") {
    ExteriorCurveSpec spec;
    spec.seed = 8;
    CHECK(generate_exterior_curve(spec).nodes == generate_exterior_curve(spec).nodes);
  }
}

TEST_CASE("exterior lower bound") {
  CHECK(exterior_lower_bound(0.5) == doctest::Approx(0.0504).epsilon(0.01));
  CHECK(exterior_lower_bound(1.0) == doctest::Approx(0.0136).epsilon(0.01));
  CHECK(exterior_lower_bound(-1.0) == exterior_lower_bound(1.0));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ExteriorCurveSpec spec;
    spec.omega = seed % 2 ? 1.0 : 0.5;
    spec.seed = seed;
    const auto g = corollary_gap(generate_exterior_curve(spec));
    CHECK(g.omega == spec.omega);
    CHECK(g.gap >= -1e-6);
    CHECK(g.gap == doctest::Approx(g.lhs - g.rhs));
  }
  CHECK(error_kind([] { corollary_gap(segment(32)); }) == ErrorKind::HypothesisNotMet);
}

TEST_CASE("linearization residual") {
  const auto eta = sample([](double s) { return std::cos(kPi * s); }, 1.0, 1024);
  for (auto flow : {FlowKind::CurveDiffusion, FlowKind::Elastic}) {
    const auto r = linearization_residual(eta, {1e-2, 5e-3, 2.5e-3}, flow);
    CHECK(r.slope == doctest::Approx(3.0).epsilon(0.1));
    REQUIRE(r.residuals.size() == 3);
    CHECK(r.residuals[0] > r.residuals[1]);
  }
  const auto zero_eps = linearization_residual(eta, {0.0}, FlowKind::CurveDiffusion);
  CHECK(zero_eps.residuals.front() == 0.0);

  // cos(pi x / d) on [-d/2, d/2] has nonzero slope at the lines.
  const auto tilted = sample([](double s) { return std::cos(kPi * (s - 0.5)); }, 1.0, 1024);
  CHECK(error_kind([&] { linearization_residual(tilted, {1e-2}, FlowKind::CurveDiffusion); }) ==
        ErrorKind::HypothesisNotMet);
}

TEST_CASE("boundary parity audit") {
  const auto compliant = boundary_parity_check(cosine_graph(0.05, 128));
  CHECK(compliant.max_reflected() == 0.0);
  // First edge of a*cos(pi(x + 1/2)) tilts by about a pi^2 h / 2.
  CHECK(std::abs(compliant.tilt_left) <= 0.05 * kPi * kPi / 128.0);

  // Endpoint edges tilted by 0.1 rad against the line normal.
  const double slope = std::tan(0.1);
  const Curve tilted = graph([=](double x) { return slope * x * x; }, 128);
  const auto audit = boundary_parity_check(tilted);
  CHECK(audit.max_reflected() == 0.0);
  CHECK(audit.max_one_sided() > 1e-3);
  CHECK(std::abs(audit.tilt_left) > 0.05);
}

TEST_CASE("verify suites pass") {
  SuiteOptions opts;
  opts.samples = 100;
  opts.curves = 10;
  opts.threads = 2;
  for (const char* name : {"poincare-suite", "exterior-corollary", "linearization-order", "convergence-order"}) {
    CAPTURE(name);
    const auto report = run_suite(name, opts);
    CHECK(report.all_pass());
    CHECK_FALSE(report.csv.empty());
  }
  CHECK(error_kind([] { run_suite("nope"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("parallel suites match the sequential ones") {
  SuiteOptions one, four;
  one.samples = four.samples = 50;
  one.curves = four.curves = 6;
  four.threads = 4;
  CHECK(run_poincare_suite(one).csv == run_poincare_suite(four).csv);
  CHECK(run_exterior_corollary(one).csv == run_exterior_corollary(four).csv);
}
