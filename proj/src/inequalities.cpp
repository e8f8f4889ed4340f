#include "plflow/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plflow/curve.hpp"
#include "plflow/error.hpp"
#include "plflow/flow.hpp"
#include "plflow/stencil.hpp"

namespace plflow {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_samples(const SampledFunction& f) {
  if (f.intervals() < kMinSampleIntervals) {
    throw Error(ErrorKind::TooFewNodes, "sampled function needs at least " + std::to_string(kMinSampleIntervals) +
                                            " intervals, got " + std::to_string(f.intervals()));
  }
  if (!(f.length > 0.0) || !std::isfinite(f.length)) throw Error(ErrorKind::InvalidArgument, "length must be positive");
  for (double v : f.values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "sampled function has a non-finite value");
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double trapezoid(const SampledFunction& f, const std::function<double(double)>& g) {
  const std::size_t n = f.intervals();
  double sum = 0.5 * (g(f.values.front()) + g(f.values.back()));
  for (std::size_t j = 1; j < n; ++j) sum += g(f.values[j]);
  return sum * f.spacing();
}

double derivative_l2sq(const SampledFunction& f) {
  const double h = f.spacing();
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < f.values.size(); ++j) {
    const double d = f.values[j + 1] - f.values[j];
    sum += d * d;
  }
  return sum / h;
}

void check_hypotheses(const SampledFunction& f, PoincareVariant variant) {
  validate_samples(f);
  const double m = max_abs(f.values);
  if (m == 0.0) throw Error(ErrorKind::ZeroFunction, "function vanishes identically");
  if (variant == PoincareVariant::MeanZero) {
    const double mean = trapezoid(f, [](double v) { return v; });
    if (std::abs(mean) > 1e-10 * f.length * m) {
      throw Error(ErrorKind::HypothesisNotMet, "integral " + std::to_string(mean) + " is not zero");
    }
  } else if (std::abs(f.values.front()) > 1e-12 * m || std::abs(f.values.back()) > 1e-12 * m) {
    throw Error(ErrorKind::HypothesisNotMet, "function does not vanish at both ends");
  }
}

}  // namespace

SampledFunction sample(const std::function<double(double)>& f, double length, std::size_t intervals) {
  SampledFunction out;
  out.length = length;
  out.values.resize(intervals + 1);
  for (std::size_t j = 0; j <= intervals; ++j) {
    out.values[j] = f(length * static_cast<double>(j) / static_cast<double>(intervals));
  }
  return out;
}

const char* to_string(PoincareVariant variant) {
  return variant == PoincareVariant::MeanZero ? "mean-zero" : "dirichlet";
}

double poincare_ratio(const SampledFunction& f, PoincareVariant variant) {
  check_hypotheses(f, variant);
  return trapezoid(f, [](double v) { return v * v; }) / derivative_l2sq(f);
}

double poincare_bound(double length) { return length * length / (kPi * kPi); }

double poincare_tolerance(const SampledFunction& f) {
  const double r = f.spacing() / f.length;
  return 1.0 + 5.0 * r * r;
}

double sup_bound_ratio(const SampledFunction& f, PoincareVariant variant) {
  check_hypotheses(f, variant);
  const double m = max_abs(f.values);
  const double factor = variant == PoincareVariant::Dirichlet ? 1.0 : 2.0;
  return m * m / (factor * f.length / kPi * derivative_l2sq(f));
}

SampledFunction random_admissible_function(std::mt19937_64& rng, PoincareVariant variant, double length,
                                           std::size_t intervals, int modes) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(modes)), b(static_cast<std::size_t>(modes));
  for (int m = 1; m <= modes; ++m) {
    const double decay = 1.0 / (static_cast<double>(m) * m * m);
    a[static_cast<std::size_t>(m - 1)] = variant == PoincareVariant::MeanZero ? coeff(rng) * decay : 0.0;
    b[static_cast<std::size_t>(m - 1)] = coeff(rng) * decay;
  }
  SampledFunction f = sample(
      [&](double s) {
        double v = 0.0;
        for (int m = 1; m <= modes; ++m) {
          const double arg = m * kPi * s / length;
          v += a[static_cast<std::size_t>(m - 1)] * std::cos(arg) + b[static_cast<std::size_t>(m - 1)] * std::sin(arg);
        }
        return v;
      },
      length, intervals);
  if (variant == PoincareVariant::MeanZero) {
    const double mean = trapezoid(f, [](double v) { return v; }) / length;
    for (double& v : f.values) v -= mean;
  } else {
    f.values.front() = 0.0;
    f.values.back() = 0.0;
  }
  return f;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(std::begin(out), std::end(out));
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double smoothstep5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }

Curve generate_exterior_curve(const ExteriorCurveSpec& spec) {
  const double twice = 2.0 * spec.omega;
  if (!(std::abs(twice - std::round(twice)) <= 1e-12) || std::round(twice) == 0.0) {
    throw Error(ErrorKind::InvalidWinding, "omega must be a nonzero multiple of 1/2, got " + std::to_string(spec.omega));
  }
  if (!(spec.gap > 0.0)) throw Error(ErrorKind::ValidationError, "gap must be positive");
  if (spec.nodes < kMinSegments) throw Error(ErrorKind::TooFewNodes, "exterior curve needs at least 8 segments");

  constexpr std::size_t kFine = 1 << 14;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const bool random = spec.amplitude != 0.0;
  const int attempts = random ? spec.max_attempts : 1;

  std::vector<double> theta(kFine + 1);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<double> c(static_cast<std::size_t>(std::max(spec.modes, 0)));
    for (std::size_t m = 0; m < c.size(); ++m) c[m] = random ? spec.amplitude * coeff(rng) / static_cast<double>(m + 1) : 0.0;
    for (std::size_t j = 0; j <= kFine; ++j) {
      const double u = static_cast<double>(j) / kFine;
      double th = 2.0 * spec.omega * kPi * smoothstep5(u);
      for (std::size_t m = 0; m < c.size(); ++m) th += c[m] * std::sin(static_cast<double>(m + 1) * kPi * u);
      theta[j] = th;
    }
    double closure = 0.0;
    for (std::size_t j = 0; j < kFine; ++j) closure += 0.5 * (std::cos(theta[j]) + std::cos(theta[j + 1]));
    closure /= kFine;
    if (!(closure >= spec.min_closure)) continue;

    const double length = spec.gap / closure;
    const double du = length / kFine;
    Curve fine;
    fine.boundary.gap = spec.gap;
    fine.nodes.reserve(kFine + 1);
    Vec2 p{-0.5 * spec.gap, 0.0};
    fine.nodes.push_back(p);
    for (std::size_t j = 0; j < kFine; ++j) {
      p.x += 0.5 * du * (std::cos(theta[j]) + std::cos(theta[j + 1]));
      p.y += 0.5 * du * (std::sin(theta[j]) + std::sin(theta[j + 1]));
      fine.nodes.push_back(p);
    }
    fine.nodes.back().x = 0.5 * spec.gap;
    return resample_uniform(fine, spec.nodes);
  }
  throw Error(ErrorKind::ClosureFailed, "no draw met the closure margin " + std::to_string(spec.min_closure) +
                                            " in " + std::to_string(attempts) + " attempts");
}

double exterior_lower_bound(double omega) {
  const double w = std::abs(omega);
  return (12.0 * kPi * kPi * w * w + kPi - 2.0 * w * kPi * std::sqrt(6.0 * kPi * (6.0 * kPi * w * w + 1.0))) / 3.0;
}

CorollaryGap corollary_gap(const Curve& curve) {
  const DiagnosticsRecord r = measure(curve, FlowKind::CurveDiffusion);
  if (std::abs(r.omega_hat) < 0.25) {
    throw Error(ErrorKind::HypothesisNotMet, "winding " + std::to_string(r.omega_hat) + " is not exterior");
  }
  CorollaryGap g;
  g.omega = std::round(2.0 * r.omega_hat) / 2.0;
  g.lhs = r.kosc + 8.0 * kPi * kPi * std::log(r.length / curve.boundary.gap);
  g.rhs = exterior_lower_bound(g.omega);
  g.gap = g.lhs - g.rhs;
  return g;
}

namespace {

/// One-sided derivative of `order` at an end, evaluated on every `stride`-th sample.
double end_derivative(const SampledFunction& f, bool left, int order, std::size_t stride, std::size_t points) {
  const double h = f.spacing();
  std::vector<double> grid(points), vals(points);
  for (std::size_t q = 0; q < points; ++q) {
    const std::size_t j = left ? q * stride : f.intervals() - q * stride;
    grid[q] = (left ? 1.0 : -1.0) * static_cast<double>(q * stride) * h;
    vals[q] = f.values[j];
  }
  const auto w = fd_weights(0.0, grid, order);
  double d = 0.0;
  for (std::size_t q = 0; q < points; ++q) d += w[q] * vals[q];
  return d;
}

}  // namespace

LinearizationResult linearization_residual(const SampledFunction& eta, const std::vector<double>& epsilons,
                                           FlowKind flow) {
  validate_samples(eta);
  const std::size_t n = eta.intervals();
  const double d = eta.length;
  const double scale = max_abs(eta.values);
  if (scale == 0.0) throw Error(ErrorKind::ZeroFunction, "perturbation vanishes identically");

  constexpr std::size_t kPoints = 10;
  const std::size_t stride = std::max<std::size_t>(1, n / 64);
  if ((kPoints - 1) * stride > n) throw Error(ErrorKind::TooFewNodes, "perturbation grid too coarse for the audit");
  for (bool left : {true, false}) {
    const double e1 = std::abs(end_derivative(eta, left, 1, stride, kPoints)) * d / (kPi * scale);
    const double e3 = std::abs(end_derivative(eta, left, 3, stride, kPoints)) * std::pow(d / kPi, 3) / scale;
    if (e1 > 1e-8 || e3 > 1e-8) {
      throw Error(ErrorKind::HypothesisNotMet,
                  std::string("perturbation slope or third derivative does not vanish at the ") +
                      (left ? "left" : "right") + " line (" + std::to_string(e1) + ", " + std::to_string(e3) + ")");
    }
  }

  // Seven-point fourth derivative on the even extension about both ends.
  const double h = eta.spacing();
  const auto ext = [&](long j) {
    const long last = static_cast<long>(n);
    if (j < 0) j = -j;
    if (j > last) j = 2 * last - j;
    return eta.values[static_cast<std::size_t>(j)];
  };
  const double grid[] = {-3 * h, -2 * h, -h, 0.0, h, 2 * h, 3 * h};
  const auto w4 = fd_weights(0.0, grid, 4);
  std::vector<double> eta4(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    double v = 0.0;
    for (long q = -3; q <= 3; ++q) v += w4[static_cast<std::size_t>(q + 3)] * ext(static_cast<long>(j) + q);
    eta4[j] = v;
  }

  LinearizationResult out;
  for (double eps : epsilons) {
    Curve c;
    c.boundary.gap = d;
    c.nodes.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) c.nodes[j] = {-0.5 * d + static_cast<double>(j) * h, eps * eta.values[j]};
    c.nodes.back().x = 0.5 * d;
    const auto f = normal_velocity(compute_frame(c), flow);
    double r = 0.0;
    for (std::size_t j = 0; j <= n; ++j) r = std::max(r, std::abs(f[j] - eps * eta4[j]));
    out.epsilons.push_back(eps);
    out.residuals.push_back(r);
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.epsilons.size(); ++i) {
    if (out.epsilons[i] > 0.0 && out.residuals[i] > 0.0) {
      lx.push_back(std::log(out.epsilons[i]));
      ly.push_back(std::log(out.residuals[i]));
    }
  }
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    out.slope = sxy / sxx;
  }
  return out;
}

double ParityAudit::max_reflected() const {
  return std::max({std::abs(ks_left), std::abs(ks_right), std::abs(ksss_left), std::abs(ksss_right)});
}

double ParityAudit::max_one_sided() const {
  return std::max(std::abs(one_sided_ks_left), std::abs(one_sided_ks_right));
}

ParityAudit boundary_parity_check(const Curve& curve) {
  const FrameField reflected = compute_frame(curve, EndpointTreatment::Reflect);
  const FrameField one_sided = compute_frame(curve, EndpointTreatment::OneSided);
  const std::size_t last = reflected.size() - 1;
  ParityAudit a;
  a.ks_left = reflected.ks[0];
  a.ks_right = reflected.ks[last];
  a.ksss_left = reflected.ksss[0];
  a.ksss_right = reflected.ksss[last];
  a.one_sided_ks_left = one_sided.ks[0];
  a.one_sided_ks_right = one_sided.ks[last];
  const Vec2 e0 = curve.nodes[1] - curve.nodes[0];
  const Vec2 e1 = curve.nodes[last] - curve.nodes[last - 1];
  a.tilt_left = std::atan2(e0.y, e0.x);
  a.tilt_right = std::atan2(e1.y, e1.x);
  return a;
}

}  // namespace plflow
