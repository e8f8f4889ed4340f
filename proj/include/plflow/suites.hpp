#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "plflow/report.hpp"

namespace plflow {

/// Outcome of a verify suite: verdicts plus the per-case CSV.
struct SuiteReport {
  std::string name;
  std::vector<CheckVerdict> checks;
  std::string csv_name;
  std::string csv;
  double wall_seconds = 0.0;

  bool all_pass() const;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t samples = 1000;   ///< random functions per Poincare variant
  std::size_t curves = 100;     ///< exterior curves per winding number
  std::size_t intervals = 1024;
};

bool is_suite(std::string_view name);

/// exterior-corollary, poincare-suite, linearization-order or convergence-order.
/// Throws InvalidArgument for other names.
SuiteReport run_suite(std::string_view name, const SuiteOptions& options = {});

SuiteReport run_poincare_suite(const SuiteOptions& options);
SuiteReport run_exterior_corollary(const SuiteOptions& options);
SuiteReport run_linearization_order(const SuiteOptions& options);
SuiteReport run_convergence_order(const SuiteOptions& options);

/// Uniformly sampled unit-circle arc of half-angle pi/3, n edges, endpoints on the lines.
Curve circle_arc(std::size_t n);
/// max |k - 1| over interior nodes of circle_arc(n), frame from one-sided stencils.
double circle_arc_curvature_error(std::size_t n);

std::string suite_text(const SuiteReport& report);
/// report.txt plus the case CSV under `dir`.
void write_suite(const SuiteReport& report, const std::filesystem::path& dir);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace plflow
