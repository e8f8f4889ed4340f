#include "plflow/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "plflow/curve.hpp"
#include "plflow/error.hpp"
#include "plflow/inequalities.hpp"
#include "plflow/io.hpp"

namespace plflow {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr const char* kSuites[] = {"exterior-corollary", "poincare-suite", "linearization-order", "convergence-order"};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

CheckVerdict verdict(std::string check, std::string identity, bool pass, double worst, double slack,
                     std::string note = {}) {
  CheckVerdict v;
  v.check = std::move(check);
  v.identity = std::move(identity);
  v.pass = pass;
  v.worst = worst;
  v.slack = slack;
  v.note = std::move(note);
  return v;
}

}  // namespace

bool SuiteReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckVerdict& v) { return v.pass; });
}

bool is_suite(std::string_view name) {
  return std::find(std::begin(kSuites), std::end(kSuites), name) != std::end(kSuites);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SuiteReport run_poincare_suite(const SuiteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.name = "poincare-suite";
  report.csv_name = "poincare.csv";
  report.csv = "case_id,variant,ratio,bound,margin\n";

  struct Case {
    PoincareVariant variant;
    double ratio, bound, margin, sup_excess;
  };
  const std::size_t n = options.samples;
  std::vector<Case> cases(2 * n);
  parallel_for(cases.size(), options.threads, [&](std::size_t i) {
    const auto variant = i < n ? PoincareVariant::MeanZero : PoincareVariant::Dirichlet;
    std::mt19937_64 rng(derive_seed(options.seed, i));
    const double length = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    const auto f = random_admissible_function(rng, variant, length, options.intervals);
    const double tol = poincare_tolerance(f);
    const double ratio = poincare_ratio(f, variant);
    const double bound = poincare_bound(length);
    cases[i] = {variant, ratio, bound, bound * tol - ratio, sup_bound_ratio(f, variant) - tol};
  });

  for (auto variant : {PoincareVariant::MeanZero, PoincareVariant::Dirichlet}) {
    std::size_t violations = 0, sup_violations = 0;
    double worst = -std::numeric_limits<double>::infinity(), worst_sup = worst;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& c = cases[i];
      if (c.variant != variant) continue;
      report.csv += std::to_string(i) + "," + to_string(variant) + "," + format_double(c.ratio) + "," +
                    format_double(c.bound) + "," + format_double(c.margin) + "\n";
      violations += c.margin < 0.0;
      sup_violations += c.sup_excess > 0.0;
      worst = std::max(worst, -c.margin / c.bound);
      worst_sup = std::max(worst_sup, c.sup_excess);
    }
    const std::string v = to_string(variant);
    report.checks.push_back(verdict("poincare:" + v, "int f^2 <= L^2 / pi^2 int f_s^2", violations == 0, worst, 0.0,
                                    std::to_string(violations) + " violations in " + std::to_string(n) + " samples"));
    report.checks.push_back(verdict("sup:" + v,
                                    variant == PoincareVariant::Dirichlet ? "max f^2 <= L / pi int f_s^2"
                                                                          : "max f^2 <= 2 L / pi int f_s^2",
                                    sup_violations == 0, worst_sup, 0.0,
                                    std::to_string(sup_violations) + " violations in " + std::to_string(n) + " samples"));
  }

  // Sharp cases: cos on the mean-zero side, sin on the Dirichlet side.
  const auto cos_f = sample([](double s) { return std::cos(kPi * s); }, 1.0, options.intervals);
  auto sin_f = sample([](double s) { return std::sin(kPi * s); }, 1.0, options.intervals);
  sin_f.values.back() = 0.0;
  for (const auto& [variant, f] : {std::pair{PoincareVariant::MeanZero, cos_f}, std::pair{PoincareVariant::Dirichlet, sin_f}}) {
    const double rel = std::abs(poincare_ratio(f, variant) / poincare_bound(1.0) - 1.0);
    report.checks.push_back(verdict(std::string("sharp:") + to_string(variant), "ratio = L^2 / pi^2 (L = 1)",
                                    rel <= 0.01, rel, 0.01));
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

SuiteReport run_exterior_corollary(const SuiteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.name = "exterior-corollary";
  report.csv_name = "corollary.csv";
  report.csv = "case_id,seed,omega,lhs,rhs,gap\n";

  const double omegas[] = {0.5, 1.0};
  const double expected_rhs[] = {0.0504, 0.0136};
  const std::size_t n = options.curves;
  std::vector<std::uint64_t> seeds(2 * n);
  std::vector<CorollaryGap> gaps(2 * n);
  parallel_for(gaps.size(), options.threads, [&](std::size_t i) {
    ExteriorCurveSpec spec;
    spec.omega = omegas[i / n];
    spec.seed = seeds[i] = derive_seed(options.seed, i);
    gaps[i] = corollary_gap(generate_exterior_curve(spec));
  });
  for (std::size_t w = 0; w < 2; ++w) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = w * n; i < (w + 1) * n; ++i) {
      const auto& g = gaps[i];
      report.csv += std::to_string(i) + "," + std::to_string(seeds[i]) + "," + format_double(g.omega) + "," +
                    format_double(g.lhs) + "," + format_double(g.rhs) + "," + format_double(g.gap) + "\n";
      worst = std::min(worst, g.gap);
    }
    const std::string tag = "omega=" + format_double(omegas[w]);
    report.checks.push_back(verdict("corollary:" + tag, "K_osc + 8 pi^2 log(L / |e|) - rhs(omega) >= 0", worst >= -1e-6,
                                    worst, -1e-6, "smallest gap over " + std::to_string(n) + " curves"));
    const double rhs = exterior_lower_bound(omegas[w]);
    const double dev = std::abs(rhs - expected_rhs[w]);
    report.checks.push_back(verdict("rhs:" + tag, "rhs(omega) ~ " + format_double(expected_rhs[w]), dev <= 5e-4, dev,
                                    5e-4, "rhs = " + format_double(rhs)));
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

SuiteReport run_linearization_order(const SuiteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.name = "linearization-order";
  report.csv_name = "linearization.csv";
  report.csv = "flow,epsilon,residual\n";
  const auto eta = sample([](double s) { return std::cos(kPi * s); }, 1.0, options.intervals);
  const std::vector<double> ladder = {1e-2, 5e-3, 2.5e-3};
  for (auto flow : {FlowKind::CurveDiffusion, FlowKind::Elastic}) {
    const std::string tag = flow == FlowKind::CurveDiffusion ? "cd" : "e";
    const auto r = linearization_residual(eta, ladder, flow);
    for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
      report.csv += tag + "," + format_double(r.epsilons[i]) + "," + format_double(r.residuals[i]) + "\n";
    }
    const double dev = std::abs(r.slope - 3.0);
    report.checks.push_back(verdict("slope:" + tag, "max |F - eps eta_xxxx| ~ eps^3", dev <= 0.3, dev, 0.3,
                                    "slope = " + format_double(r.slope)));
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

Curve circle_arc(std::size_t n) {
  const double half = kPi / 3.0;
  Curve c;
  c.boundary.gap = 2.0 * std::sin(half);
  c.nodes.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double phi = -half + 2.0 * half * static_cast<double>(j) / static_cast<double>(n);
    c.nodes[j] = {std::sin(phi), std::cos(phi)};
  }
  c.nodes.front().x = -0.5 * c.boundary.gap;
  c.nodes.back().x = 0.5 * c.boundary.gap;
  return c;
}

double circle_arc_curvature_error(std::size_t n) {
  const auto frame = compute_frame(circle_arc(n), EndpointTreatment::OneSided);
  double err = 0.0;
  for (std::size_t i = 1; i + 1 < frame.k.size(); ++i) err = std::max(err, std::abs(std::abs(frame.k[i]) - 1.0));
  return err;
}

SuiteReport run_convergence_order(const SuiteOptions&) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.name = "convergence-order";
  report.csv_name = "convergence.csv";
  report.csv = "nodes,error,ratio\n";
  const std::size_t ladder[] = {64, 128, 256};
  double previous = 0.0;
  for (std::size_t n : ladder) {
    const double err = circle_arc_curvature_error(n);
    report.csv += std::to_string(n) + "," + format_double(err) + "," + (previous > 0.0 ? format_double(previous / err) : "") + "\n";
    if (previous > 0.0) {
      const double ratio = previous / err;
      const double dev = std::abs(ratio / 4.0 - 1.0);
      report.checks.push_back(verdict("ratio:" + std::to_string(n / 2) + "-" + std::to_string(n),
                                      "max |k - 1| shrinks by 4 when N doubles", dev <= 0.2, dev, 0.2,
                                      "ratio = " + format_double(ratio)));
    }
    previous = err;
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

SuiteReport run_suite(std::string_view name, const SuiteOptions& options) {
  if (name == "exterior-corollary") return run_exterior_corollary(options);
  if (name == "poincare-suite") return run_poincare_suite(options);
  if (name == "linearization-order") return run_linearization_order(options);
  if (name == "convergence-order") return run_convergence_order(options);
  throw Error(ErrorKind::InvalidArgument, "no verify suite named '" + std::string(name) + "'");
}

std::string suite_text(const SuiteReport& report) {
  std::string out = "suite = " + report.name + "\n";
  out += "wall_seconds = " + format_double(report.wall_seconds) + "\n";
  out += "all_pass = " + std::string(report.all_pass() ? "true" : "false") + "\n\n";
  return out + verification_text(report.checks);
}

void write_suite(const SuiteReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.txt", suite_text(report));
  write_text(dir / report.csv_name, report.csv);
}

}  // namespace plflow
