#include "hilbert/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hilbert/types.hpp"

namespace hilbert {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void die(int line, const std::string& msg) {
  throw ArgumentError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    die(line, "key '" + key + "' needs a real number, got '" + v + "'");
  return d;
}

std::uint64_t to_u64(const std::string& v, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE || v.front() == '-')
    die(line, "key '" + key + "' needs a nonnegative integer, got '" + v +
                  "'");
  return static_cast<std::uint64_t>(u);
}

int to_int(const std::string& v, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    die(line, "key '" + key + "' needs an integer, got '" + v + "'");
  return static_cast<int>(n);
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  die(line, "key '" + key + "' needs true or false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& v, int line,
                               const std::string& key) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) out.push_back(to_double(tok, line, key));
  return out;
}

std::vector<int> to_ints(const std::string& v, int line,
                         const std::string& key) {
  std::vector<int> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) out.push_back(to_int(tok, line, key));
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt17(v[i]);
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

void apply_domain(DomainSpec& d, const std::string& key,
                  const std::string& value, int line) {
  if (key == "kind")
    d.kind = value;
  else if (key == "dim")
    d.dim = to_int(value, line, key);
  else if (key == "matrix")
    d.matrix = to_doubles(value, line, key);
  else if (key == "p")
    d.p = to_double(value, line, key);
  else if (key == "radius")
    d.radius = to_double(value, line, key);
  else if (key == "points")
    d.points = to_doubles(value, line, key);
  else
    die(line, "unknown key '" + key + "' in [domain]");
}

void apply_group(GroupSpec& g, const std::string& key,
                 const std::string& value, int line) {
  if (key == "generators")
    g.generators = value;
  else if (key == "free")
    g.free = to_bool(value, line, key);
  else if (key == "parabolics")
    g.parabolics = to_bool(value, line, key);
  else if (key == "parabolic_marker")
    g.parabolic_marker = to_ints(value, line, key);
  else
    die(line, "unknown key '" + key + "' in [group]");
}

void apply_run(RunSpec& r, const std::string& key, const std::string& value,
               int line) {
  if (key == "seed")
    r.seed = to_u64(value, line, key);
  else if (key == "R")
    r.R = to_double(value, line, key);
  else if (key == "out")
    r.out = value;
  else if (key == "x")
    r.x = to_doubles(value, line, key);
  else if (key == "y")
    r.y = to_doubles(value, line, key);
  else if (key == "margin")
    r.margin = to_double(value, line, key);
  else if (key == "cap")
    r.cap = static_cast<std::size_t>(to_u64(value, line, key));
  else
    die(line, "unknown key '" + key + "' in [run]");
}

void apply_experiment(ExperimentSpec& e, const std::string& key,
                      const std::string& value, int line) {
  if (key == "name")
    e.name = value;
  else if (key == "t_max")
    e.t_max = to_double(value, line, key);
  else if (key == "t_window")
    e.t_window = to_double(value, line, key);
  else if (key == "expected_delta")
    e.expected_delta = to_double(value, line, key);
  else if (key == "delta_tol")
    e.delta_tol = to_double(value, line, key);
  else if (key == "spread_tol")
    e.spread_tol = to_double(value, line, key);
  else if (key == "cauchy_shrink")
    e.cauchy_shrink = to_double(value, line, key);
  else if (key == "cap_a_axis")
    e.cap_a_axis = to_doubles(value, line, key);
  else if (key == "cap_a_angle")
    e.cap_a_angle = to_double(value, line, key);
  else if (key == "cap_b_axis")
    e.cap_b_axis = to_doubles(value, line, key);
  else if (key == "cap_b_angle")
    e.cap_b_angle = to_double(value, line, key);
  else if (key == "mc_pairs")
    e.mc_pairs = static_cast<std::size_t>(to_u64(value, line, key));
  else if (key == "s_offset")
    e.s_offset = to_double(value, line, key);
  else if (key == "measure_radius")
    e.measure_radius = to_double(value, line, key);
  else if (key == "delta_radius")
    e.delta_radius = to_double(value, line, key);
  else if (key == "l_max")
    e.l_max = to_double(value, line, key);
  else if (key == "epsilon")
    e.epsilon = to_double(value, line, key);
  else if (key == "ratio_lo")
    e.ratio_lo = to_double(value, line, key);
  else if (key == "ratio_hi")
    e.ratio_hi = to_double(value, line, key);
  else if (key == "compare_paths")
    e.compare_paths = to_bool(value, line, key);
  else if (key == "path")
    e.path = value;
  else if (key == "orbit_samples")
    e.orbit_samples = to_int(value, line, key);
  else if (key == "t_grid")
    e.t_grid = to_doubles(value, line, key);
  else if (key == "samples")
    e.samples = static_cast<std::size_t>(to_u64(value, line, key));
  else if (key == "bootstrap_rounds")
    e.bootstrap_rounds = static_cast<std::size_t>(to_u64(value, line, key));
  else if (key == "phi_center")
    e.phi_center = to_doubles(value, line, key);
  else if (key == "phi_radius")
    e.phi_radius = to_double(value, line, key);
  else if (key == "psi_center")
    e.psi_center = to_doubles(value, line, key);
  else if (key == "psi_radius")
    e.psi_radius = to_double(value, line, key);
  else if (key == "gap_min")
    e.gap_min = to_double(value, line, key);
  else if (key == "significance")
    e.significance = to_double(value, line, key);
  else if (key == "cusp_r")
    e.cusp_r = to_double(value, line, key);
  else
    die(line, "unknown key '" + key + "' in [experiment]");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string section;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        die(lineno, "unterminated section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "domain" && section != "group" && section != "run" &&
          section != "experiment")
        die(lineno, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      die(lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) die(lineno, "empty key");
    if (section.empty())
      die(lineno, "key '" + key + "' appears before any section header");
    if (section == "domain")
      apply_domain(c.domain, key, value, lineno);
    else if (section == "group")
      apply_group(c.group, key, value, lineno);
    else if (section == "run")
      apply_run(c.run, key, value, lineno);
    else
      apply_experiment(c.experiment, key, value, lineno);
  }

  // Semantic checks that do not need the geometry built.
  if (c.domain.kind != "ellipsoid" && c.domain.kind != "pnorm" &&
      c.domain.kind != "orbit-hull")
    throw ArgumentError("config key 'kind' must be ellipsoid, pnorm, or "
                        "orbit-hull, got '" +
                        c.domain.kind + "'");
  if (c.domain.dim < 2 || c.domain.dim > 4)
    throw ArgumentError("config key 'dim' must be 2, 3, or 4");
  if (!c.domain.matrix.empty() &&
      c.domain.matrix.size() !=
          static_cast<std::size_t>(c.domain.dim) *
              static_cast<std::size_t>(c.domain.dim))
    throw ArgumentError("config key 'matrix' needs dim*dim entries");
  if (!c.domain.points.empty() &&
      c.domain.points.size() % static_cast<std::size_t>(c.domain.dim) != 0)
    throw ArgumentError("config key 'points' needs a multiple of dim entries");
  if (c.experiment.path != "auto" && c.experiment.path != "axis" &&
      c.experiment.path != "words")
    throw ArgumentError("config key 'path' must be auto, axis, or words");
  const std::string& name = c.experiment.name;
  if (name != "orbit-counting" && name != "orbit-equidistribution" &&
      name != "geodesic-counting" && name != "mixing" &&
      name != "length-spectrum" && name != "critical-gap")
    throw ArgumentError("config key 'name' names no experiment: '" + name +
                        "'");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[domain]\n";
  out << "kind = " << c.domain.kind << "\n";
  out << "dim = " << c.domain.dim << "\n";
  out << "matrix = " << join(c.domain.matrix) << "\n";
  out << "p = " << fmt17(c.domain.p) << "\n";
  out << "radius = " << fmt17(c.domain.radius) << "\n";
  out << "points = " << join(c.domain.points) << "\n";
  out << "\n[group]\n";
  out << "generators = " << c.group.generators << "\n";
  out << "free = " << (c.group.free ? "true" : "false") << "\n";
  out << "parabolics = " << (c.group.parabolics ? "true" : "false") << "\n";
  out << "parabolic_marker = " << join(c.group.parabolic_marker) << "\n";
  out << "\n[run]\n";
  out << "seed = " << c.run.seed << "\n";
  out << "R = " << fmt17(c.run.R) << "\n";
  out << "out = " << c.run.out << "\n";
  out << "x = " << join(c.run.x) << "\n";
  out << "y = " << join(c.run.y) << "\n";
  out << "margin = " << fmt17(c.run.margin) << "\n";
  out << "cap = " << c.run.cap << "\n";
  const ExperimentSpec& e = c.experiment;
  out << "\n[experiment]\n";
  out << "name = " << e.name << "\n";
  out << "t_max = " << fmt17(e.t_max) << "\n";
  out << "t_window = " << fmt17(e.t_window) << "\n";
  out << "expected_delta = " << fmt17(e.expected_delta) << "\n";
  out << "delta_tol = " << fmt17(e.delta_tol) << "\n";
  out << "spread_tol = " << fmt17(e.spread_tol) << "\n";
  out << "cauchy_shrink = " << fmt17(e.cauchy_shrink) << "\n";
  out << "cap_a_axis = " << join(e.cap_a_axis) << "\n";
  out << "cap_a_angle = " << fmt17(e.cap_a_angle) << "\n";
  out << "cap_b_axis = " << join(e.cap_b_axis) << "\n";
  out << "cap_b_angle = " << fmt17(e.cap_b_angle) << "\n";
  out << "mc_pairs = " << e.mc_pairs << "\n";
  out << "s_offset = " << fmt17(e.s_offset) << "\n";
  out << "measure_radius = " << fmt17(e.measure_radius) << "\n";
  out << "delta_radius = " << fmt17(e.delta_radius) << "\n";
  out << "l_max = " << fmt17(e.l_max) << "\n";
  out << "epsilon = " << fmt17(e.epsilon) << "\n";
  out << "ratio_lo = " << fmt17(e.ratio_lo) << "\n";
  out << "ratio_hi = " << fmt17(e.ratio_hi) << "\n";
  out << "compare_paths = " << (e.compare_paths ? "true" : "false") << "\n";
  out << "path = " << e.path << "\n";
  out << "orbit_samples = " << e.orbit_samples << "\n";
  out << "t_grid = " << join(e.t_grid) << "\n";
  out << "samples = " << e.samples << "\n";
  out << "bootstrap_rounds = " << e.bootstrap_rounds << "\n";
  out << "phi_center = " << join(e.phi_center) << "\n";
  out << "phi_radius = " << fmt17(e.phi_radius) << "\n";
  out << "psi_center = " << join(e.psi_center) << "\n";
  out << "psi_radius = " << fmt17(e.psi_radius) << "\n";
  out << "gap_min = " << fmt17(e.gap_min) << "\n";
  out << "significance = " << fmt17(e.significance) << "\n";
  out << "cusp_r = " << fmt17(e.cusp_r) << "\n";
  return out.str();
}

}  // namespace hilbert
