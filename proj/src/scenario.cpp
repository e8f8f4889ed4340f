#include "plflow/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "plflow/curve.hpp"
#include "plflow/error.hpp"
#include "plflow/inequalities.hpp"
#include "plflow/io.hpp"

namespace plflow {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class Int>
Int parse_integer(const std::string& text, const std::string& what) {
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError, what + ": '" + text + "' is not a non-negative integer");
  }
  return v;
}

std::string stop_token(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::CurvatureBlowup: return "curvature-blowup";
    case StopReason::NodeCollapse: return "node-collapse";
    case StopReason::MaxTime: return "max-time";
    case StopReason::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

bool valid_check(const std::string& token) {
  static const std::vector<std::string> plain = {"length-identity", "winding",        "kosc-evolution",
                                                 "time-integral",   "decay-envelope", "boundary-parity"};
  if (std::find(plain.begin(), plain.end(), token) != plain.end()) return true;
  if (token.rfind("stop=", 0) == 0) {
    const std::string r = token.substr(5);
    for (auto reason : {StopReason::Converged, StopReason::CurvatureBlowup, StopReason::NodeCollapse,
                        StopReason::MaxTime, StopReason::NumericalFailure}) {
      if (r == stop_token(reason)) return true;
    }
    return false;
  }
  for (const char* prefix : {"non-increasing:", "strictly-decreasing:", "rate:"}) {
    const std::string p(prefix);
    if (token.rfind(p, 0) == 0) return is_record_field(token.substr(p.size()));
  }
  return false;
}

bool filesystem_safe(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

std::vector<double> unit_amplitudes(const GeneratorSpec& g) {
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(g.modes.size(), 1.0);
  for (std::size_t i = 1; i < a.size(); ++i) a[i] = u(rng);
  return a;
}

double graph_sup(double gap, const std::vector<int>& modes, const std::vector<double>& amps) {
  constexpr int kSamples = 4096;
  double m = 0.0;
  for (int j = 0; j <= kSamples; ++j) {
    const double xi = static_cast<double>(j) / kSamples;
    double y = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) y += amps[i] * std::cos(modes[i] * kPi * xi);
    m = std::max(m, std::abs(y));
  }
  return m * (gap > 0.0 ? 1.0 : 0.0);
}

}  // namespace

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::PerturbedSegment: return "perturbed-segment";
    case GeneratorKind::Exterior: return "exterior";
    case GeneratorKind::LemniscateLobe: return "lemniscate-lobe";
    case GeneratorKind::File: return "file";
  }
  return "?";
}

ScenarioSpec parse_scenario(std::string_view text) {
  ScenarioSpec spec;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string field = where + " (" + key + ")";
    if (seen.count(key)) {
      throw Error(ErrorKind::ParseError, field + ": duplicate key, first set on line " + std::to_string(seen[key]));
    }
    seen[key] = line_no;
    const auto number = [&] { return parse_double(value, field); };
    auto& g = spec.generator;
    auto& s = spec.solver;
    auto& c = spec.settings;

    if (key == "name") {
      spec.name = value;
    } else if (key == "flow") {
      if (value == "cd") spec.flow = FlowKind::CurveDiffusion;
      else if (value == "e") spec.flow = FlowKind::Elastic;
      else throw Error(ErrorKind::ParseError, field + ": expected cd or e");
    } else if (key == "gap") {
      spec.gap = number();
    } else if (key == "generator") {
      if (value == "perturbed-segment") g.kind = GeneratorKind::PerturbedSegment;
      else if (value == "exterior") g.kind = GeneratorKind::Exterior;
      else if (value == "lemniscate-lobe") g.kind = GeneratorKind::LemniscateLobe;
      else if (value == "file") g.kind = GeneratorKind::File;
      else throw Error(ErrorKind::ParseError, field + ": unknown generator '" + value + "'");
    } else if (key == "amplitude") {
      g.amplitude = number();
    } else if (key == "modes") {
      g.modes.clear();
      for (const auto& m : split_list(value)) g.modes.push_back(parse_integer<int>(m, field));
    } else if (key == "seed") {
      g.seed = parse_integer<std::uint64_t>(value, field);
    } else if (key == "target_product") {
      g.target_product = number();
    } else if (key == "amplitude_cap") {
      g.amplitude_cap = number();
    } else if (key == "omega") {
      g.omega = number();
    } else if (key == "scale") {
      g.scale = number();
    } else if (key == "turning") {
      g.turning = number();
    } else if (key == "path") {
      g.path = value;
    } else if (key == "nodes") {
      s.nodes = parse_integer<std::size_t>(value, field);
    } else if (key == "stepping") {
      if (value == "explicit") s.stepping = Stepping::Explicit;
      else if (value == "semi-implicit") s.stepping = Stepping::SemiImplicit;
      else throw Error(ErrorKind::ParseError, field + ": expected explicit or semi-implicit");
    } else if (key == "cfl") {
      s.cfl = number();
    } else if (key == "resample_period") {
      s.resample_period = parse_integer<std::size_t>(value, field);
    } else if (key == "t_max") {
      s.t_max = number();
    } else if (key == "convergence_tol") {
      s.convergence_tol = number();
    } else if (key == "blowup_threshold") {
      s.blowup_threshold = number();
    } else if (key == "resolution_limit") {
      s.resolution_limit = number();
    } else if (key == "min_spacing_fraction") {
      s.min_spacing_fraction = number();
    } else if (key == "max_displacement") {
      s.max_displacement = number();
    } else if (key == "max_steps") {
      s.max_steps = parse_integer<std::size_t>(value, field);
    } else if (key == "record_interval") {
      s.record_interval = number();
    } else if (key == "snapshots") {
      if (value == "none") s.snapshots = SnapshotPolicy::None;
      else if (value == "every-record") s.snapshots = SnapshotPolicy::EveryRecord;
      else throw Error(ErrorKind::ParseError, field + ": expected none or every-record");
    } else if (key == "checks") {
      spec.checks = split_list(value);
    } else if (key == "monotone_slack_abs") {
      c.monotone.absolute = number();
    } else if (key == "monotone_slack_rel") {
      c.monotone.relative = number();
    } else if (key == "identity_skip") {
      c.identity_skip = parse_integer<std::size_t>(value, field);
    } else if (key == "length_tolerance") {
      c.length_tolerance = number();
    } else if (key == "winding_tolerance") {
      c.winding_tolerance = number();
    } else if (key == "kbar_tolerance") {
      c.kbar_tolerance = number();
    } else if (key == "kosc_tolerance") {
      c.kosc_tolerance = number();
    } else if (key == "envelope_slack") {
      c.envelope_slack = number();
    } else if (key == "expected_rate") {
      c.expected_rate = number();
    } else if (key == "rate_tolerance") {
      c.rate_tolerance = number();
    } else if (key == "min_rate_quality") {
      c.min_rate_quality = number();
    } else if (key == "rate_window") {
      c.rate_window = number();
    } else {
      throw Error(ErrorKind::ParseError, where + ": unknown key '" + key + "'");
    }
  }
  if (!seen.count("name")) throw Error(ErrorKind::ParseError, "missing required key 'name'");
  if (!seen.count("flow")) throw Error(ErrorKind::ParseError, "missing required key 'flow'");
  validate_scenario(spec);
  return spec;
}

void validate_scenario(const ScenarioSpec& spec) {
  const auto fail = [](const std::string& what) { throw Error(ErrorKind::ValidationError, what); };
  if (!filesystem_safe(spec.name)) fail("name must be nonempty and use only letters, digits, '-', '_' or '.'");
  if (!(spec.gap > 0.0) || !std::isfinite(spec.gap)) fail("gap must be positive");
  const auto& g = spec.generator;
  switch (g.kind) {
    case GeneratorKind::PerturbedSegment:
      if (g.modes.empty()) fail("modes must list at least one mode");
      for (int m : g.modes) {
        if (m < 1) fail("modes must be positive integers");
      }
      if (!std::isfinite(g.amplitude)) fail("amplitude must be finite");
      if (!(g.amplitude_cap > 0.0)) fail("amplitude_cap must be positive");
      if (g.target_product && !(*g.target_product > 0.0)) fail("target_product must be positive");
      break;
    case GeneratorKind::Exterior: {
      const double twice = 2.0 * g.omega;
      if (!(std::abs(twice - std::round(twice)) <= 1e-12) || std::round(twice) == 0.0) {
        fail("omega must be a nonzero multiple of 1/2 (the total turning is a multiple of pi)");
      }
      if (!std::isfinite(g.amplitude)) fail("amplitude must be finite");
      break;
    }
    case GeneratorKind::LemniscateLobe:
      if (!(g.scale > 0.0 && g.scale <= 1.0)) fail("scale must lie in (0, 1]");
      if (!std::isfinite(g.turning)) fail("turning must be finite");
      break;
    case GeneratorKind::File:
      if (g.path.empty()) fail("path must be set for the file generator");
      break;
  }
  validate_config(spec.solver);
  for (const auto& token : spec.checks) {
    if (!valid_check(token)) fail("unknown check '" + token + "'");
    if (token == "decay-envelope" && spec.flow != FlowKind::Elastic) fail("decay-envelope applies to flow e only");
    if (token == "kosc-evolution") {
      if (spec.flow != FlowKind::CurveDiffusion) fail("kosc-evolution applies to flow cd only");
      if (spec.solver.snapshots != SnapshotPolicy::EveryRecord) fail("kosc-evolution needs snapshots = every-record");
    }
  }
  const auto& c = spec.settings;
  if (!(c.monotone.absolute >= 0.0) || !(c.monotone.relative >= 0.0)) fail("monotone slacks must be non-negative");
  for (double v : {c.length_tolerance, c.winding_tolerance, c.kbar_tolerance, c.kosc_tolerance, c.envelope_slack,
                   c.rate_tolerance}) {
    if (!(v > 0.0)) fail("tolerances must be positive");
  }
  if (!(c.rate_window > 0.0 && c.rate_window <= 1.0)) fail("rate_window must lie in (0, 1]");
  if (c.expected_rate && !(*c.expected_rate > 0.0)) fail("expected_rate must be positive");
}

std::string render(const ScenarioSpec& spec) {
  std::string out;
  const auto put = [&](const std::string& key, const std::string& value, const char* unit = nullptr) {
    out += key + " = " + value;
    if (unit) out += std::string("  # ") + unit;
    out += "\n";
  };
  const auto num = [](double v) { return format_double(v); };
  const auto& g = spec.generator;
  const auto& s = spec.solver;
  const auto& c = spec.settings;

  put("name", spec.name);
  put("flow", spec.flow == FlowKind::CurveDiffusion ? "cd" : "e", "cd | e");
  put("gap", num(spec.gap), "length");
  out += "\n";
  put("generator", to_string(g.kind), "perturbed-segment | exterior | lemniscate-lobe | file");
  put("amplitude", num(g.amplitude), "length (perturbed-segment), radians (exterior)");
  std::string modes;
  for (std::size_t i = 0; i < g.modes.size(); ++i) modes += (i ? "," : "") + std::to_string(g.modes[i]);
  put("modes", modes);
  put("seed", std::to_string(g.seed));
  if (g.target_product) put("target_product", num(*g.target_product), "dimensionless L0 * E0");
  put("amplitude_cap", num(g.amplitude_cap), "fraction of gap");
  put("omega", num(g.omega), "multiple of 1/2");
  put("scale", num(g.scale), "fraction of the parameter interval");
  put("turning", num(g.turning), "radians");
  if (!g.path.empty()) put("path", g.path);
  out += "\n";
  put("nodes", std::to_string(s.nodes));
  put("stepping", to_string(s.stepping), "explicit | semi-implicit");
  if (s.cfl) put("cfl", num(*s.cfl), "dt = cfl h^4 (explicit) or cfl h^2 gap^2 (semi-implicit)");
  put("resample_period", std::to_string(s.resample_period), "steps");
  put("t_max", num(s.t_max), "length^4");
  put("convergence_tol", num(s.convergence_tol), "gap * max|k|");
  put("blowup_threshold", num(s.blowup_threshold), "gap * max|k| and gap^1.5 * |k_s|_2");
  put("resolution_limit", num(s.resolution_limit), "radians per edge");
  put("min_spacing_fraction", num(s.min_spacing_fraction), "fraction of gap");
  put("max_displacement", num(s.max_displacement), "fraction of the smallest edge per step");
  put("max_steps", std::to_string(s.max_steps));
  put("record_interval", num(s.record_interval), "length^4");
  put("snapshots", s.snapshots == SnapshotPolicy::EveryRecord ? "every-record" : "none", "none | every-record");
  out += "\n";
  std::string checks;
  for (std::size_t i = 0; i < spec.checks.size(); ++i) checks += (i ? ", " : "") + spec.checks[i];
  put("checks", checks);
  put("monotone_slack_abs", num(c.monotone.absolute));
  put("monotone_slack_rel", num(c.monotone.relative), "of the initial value");
  put("identity_skip", std::to_string(c.identity_skip), "leading records");
  put("length_tolerance", num(c.length_tolerance), "relative");
  put("winding_tolerance", num(c.winding_tolerance), "omega_hat drift");
  put("kbar_tolerance", num(c.kbar_tolerance), "relative");
  put("kosc_tolerance", num(c.kosc_tolerance), "relative to 2 L |k_ss|^2");
  put("envelope_slack", num(c.envelope_slack), "relative");
  if (c.expected_rate) put("expected_rate", num(*c.expected_rate), "1 / length^4");
  put("rate_tolerance", num(c.rate_tolerance), "relative");
  put("min_rate_quality", num(c.min_rate_quality), "coefficient of determination");
  put("rate_window", num(c.rate_window), "trailing fraction of records");
  return out;
}

std::string override_key(std::string_view text, std::string_view key, std::string_view value) {
  std::istringstream in{std::string(text)};
  std::string out, line;
  bool replaced = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    const std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    const auto eq = body.find('=');
    if (eq != std::string::npos && trim(body.substr(0, eq)) == key) {
      out += std::string(key) + " = " + std::string(value) + "\n";
      replaced = true;
    } else {
      out += line + "\n";
    }
  }
  if (!replaced) out += std::string(key) + " = " + std::string(value) + "\n";
  return out;
}

Curve perturbed_segment(double gap, const std::vector<int>& modes, const std::vector<double>& amplitudes,
                        std::size_t nodes) {
  const std::size_t fine = std::max<std::size_t>(4096, 8 * nodes);
  Curve c;
  c.boundary.gap = gap;
  c.nodes.resize(fine + 1);
  for (std::size_t j = 0; j <= fine; ++j) {
    const double xi = static_cast<double>(j) / static_cast<double>(fine);
    double y = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) y += amplitudes[i] * std::cos(modes[i] * kPi * xi);
    c.nodes[j] = {-0.5 * gap + xi * gap, y};
  }
  c.nodes.back().x = 0.5 * gap;
  return resample_uniform(c, nodes);
}

Curve lemniscate_lobe(double gap, double scale, double turning, std::size_t nodes) {
  constexpr std::size_t kFine = 1 << 15;
  std::vector<double> theta(kFine + 1);
  for (std::size_t j = 0; j <= kFine; ++j) {
    const double u = static_cast<double>(j) / kFine;
    const double v = (u - 0.5 * (1.0 - scale)) / scale;
    const double sn = std::sin(kPi * v);
    theta[j] = v > 0.0 && v < 1.0 ? turning * sn * sn * sn * sn : 0.0;
  }
  double closure = 0.0;
  for (std::size_t j = 0; j < kFine; ++j) closure += 0.5 * (std::cos(theta[j]) + std::cos(theta[j + 1]));
  closure /= kFine;
  if (!(closure >= 0.05)) {
    throw Error(ErrorKind::ClosureFailed, "lobe profile barely advances horizontally (closure " +
                                              std::to_string(closure) + ")");
  }
  const double du = gap / closure / kFine;
  Curve c;
  c.boundary.gap = gap;
  c.nodes.reserve(kFine + 1);
  Vec2 p{-0.5 * gap, 0.0};
  c.nodes.push_back(p);
  for (std::size_t j = 0; j < kFine; ++j) {
    p.x += 0.5 * du * (std::cos(theta[j]) + std::cos(theta[j + 1]));
    p.y += 0.5 * du * (std::sin(theta[j]) + std::sin(theta[j + 1]));
    c.nodes.push_back(p);
  }
  c.nodes.back().x = 0.5 * gap;
  return resample_uniform(c, nodes);
}

Curve generate_initial(const ScenarioSpec& spec) {
  validate_scenario(spec);
  const auto& g = spec.generator;
  const std::size_t n = spec.solver.nodes;
  switch (g.kind) {
    case GeneratorKind::PerturbedSegment: {
      const auto unit = unit_amplitudes(g);
      const auto build = [&](double s) {
        std::vector<double> a(unit);
        for (double& v : a) v *= s;
        return perturbed_segment(spec.gap, g.modes, a, n);
      };
      if (!g.target_product) return build(g.amplitude);
      const auto product = [&](double s) {
        const auto r = measure(build(s), spec.flow);
        return r.length * r.energy;
      };
      const double s_cap = g.amplitude_cap * spec.gap / graph_sup(spec.gap, g.modes, unit);
      const double target = *g.target_product;
      const double at_cap = product(s_cap);
      if (at_cap < target) {
        throw Error(ErrorKind::TargetUnreachable,
                    "L0*E0 reaches only " + std::to_string(at_cap) + " at the amplitude cap " +
                        std::to_string(g.amplitude_cap) + " * gap; requested " + std::to_string(target));
      }
      double lo = 0.0, hi = s_cap;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * s_cap; ++it) {
        const double mid = 0.5 * (lo + hi);
        (product(mid) < target ? lo : hi) = mid;
      }
      return build(0.5 * (lo + hi));
    }
    case GeneratorKind::Exterior: {
      ExteriorCurveSpec e;
      e.omega = g.omega;
      e.gap = spec.gap;
      e.seed = g.seed;
      e.amplitude = g.amplitude;
      e.nodes = n;
      return generate_exterior_curve(e);
    }
    case GeneratorKind::LemniscateLobe:
      return lemniscate_lobe(spec.gap, g.scale, g.turning, n);
    case GeneratorKind::File: {
      Curve c = read_curve_csv(g.path, spec.gap);
      validate_curve(c);
      if (endpoint_offset(c) > kOffLineTolerance * spec.gap) {
        throw Error(ErrorKind::ValidationError, "curve endpoints in " + g.path + " are not on the lines x = -gap/2, +gap/2");
      }
      return c;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown generator");
}

namespace {

struct Preset {
  const char* name;
  const char* text;
};

// Thresholds: 0.9 pi / 10, 0.9 pi and 0.9 * 4 pi / 7; 2 pi^4 is twice the slowest linear rate.
const Preset kFlowPresets[] = {
    {"cd-stability", R"(name = cd-stability
flow = cd
gap = 1
generator = perturbed-segment
modes = 1
target_product = 0.28274333882308139
nodes = 256
stepping = semi-implicit
t_max = 2
record_interval = 0.001
snapshots = every-record
checks = stop=converged, non-increasing:Kosc, rate:kss_l2sq, winding, length-identity, kosc-evolution, time-integral, boundary-parity
monotone_slack_abs = 0
monotone_slack_rel = 1e-8
identity_skip = 10
expected_rate = 194.81818206800688
rate_tolerance = 0.2
)"},
    {"e-stability", R"(name = e-stability
flow = e
gap = 1
generator = perturbed-segment
modes = 1
target_product = 2.827433388230814
amplitude_cap = 0.3
nodes = 256
stepping = semi-implicit
t_max = 2
record_interval = 0.001
snapshots = every-record
checks = stop=converged, non-increasing:L, non-increasing:Kosc, non-increasing:E, rate:E, winding, time-integral, boundary-parity
min_rate_quality = 0.99
monotone_slack_abs = 0
monotone_slack_rel = 1e-8
)"},
    {"e-decay-envelope", R"(name = e-decay-envelope
flow = e
gap = 1
generator = perturbed-segment
modes = 1
target_product = 1.6157333647033223
amplitude_cap = 0.3
nodes = 256
stepping = semi-implicit
t_max = 2
record_interval = 0.001
snapshots = every-record
checks = stop=converged, decay-envelope, non-increasing:E, winding, boundary-parity
envelope_slack = 0.1
monotone_slack_abs = 0
monotone_slack_rel = 1e-8
)"},
    {"lemniscate-singularity", R"(name = lemniscate-singularity
flow = cd
gap = 1
generator = lemniscate-lobe
scale = 0.9
turning = 6.5
nodes = 512
stepping = semi-implicit
t_max = 0.01
record_interval = 1e-6
snapshots = every-record
checks = stop=curvature-blowup, strictly-decreasing:L, time-integral, boundary-parity
)"},
};

const char* kSuitePresets[] = {"exterior-corollary", "poincare-suite", "linearization-order", "convergence-order"};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kFlowPresets) out.emplace_back(p.name);
  for (const char* s : kSuitePresets) out.emplace_back(s);
  return out;
}

bool is_flow_preset(std::string_view name) {
  return std::any_of(std::begin(kFlowPresets), std::end(kFlowPresets), [&](const Preset& p) { return name == p.name; });
}

std::string preset_text(std::string_view name) {
  for (const auto& p : kFlowPresets) {
    if (name == p.name) return p.text;
  }
  throw Error(ErrorKind::InvalidArgument, "no flow preset named '" + std::string(name) + "'");
}

}  // namespace plflow
