#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hilbert {

// Plain-data mirror of the structured-text config.  Sections and keys map
// one-to-one onto the parser; every field has a default so a minimal config
// (domain + group) is complete.  Serialization writes every key, so
// parse(serialize(c)) reproduces c exactly.

struct DomainSpec {
  std::string kind = "ellipsoid";  // ellipsoid | pnorm | orbit-hull
  int dim = 2;
  std::vector<double> matrix;  // row-major quadratic form; empty = identity
  double p = 4.0;              // pnorm exponent
  double radius = 1.0;         // pnorm radius
  std::vector<double> points;  // orbit-hull cloud, row-major, dim columns

  bool operator==(const DomainSpec&) const = default;
};

struct GroupSpec {
  std::string generators;  // path to the generator matrix file
  bool free = false;
  bool parabolics = false;
  std::vector<int> parabolic_marker;

  bool operator==(const GroupSpec&) const = default;
};

struct RunSpec {
  std::uint64_t seed = 0;
  double R = 12.0;
  std::string out = "run-out";
  std::vector<double> x;  // basepoint; empty = domain center
  std::vector<double> y;  // second basepoint; empty = x
  double margin = -1.0;   // enumeration margin; negative = library default
  std::size_t cap = 20'000'000;

  bool operator==(const RunSpec&) const = default;
};

struct ExperimentSpec {
  std::string name = "orbit-counting";
  // orbit counting / equidistribution
  double t_max = 12.0;
  double t_window = 3.0;
  double expected_delta = 1.0;
  double delta_tol = 0.05;
  double spread_tol = 0.5;
  double cauchy_shrink = 0.3;
  std::vector<double> cap_a_axis;  // empty = whole boundary
  double cap_a_angle = 0.5;
  std::vector<double> cap_b_axis;
  double cap_b_angle = 0.5;
  std::size_t mc_pairs = 20'000;
  // measures shared by several experiments
  double s_offset = 0.05;
  double measure_radius = 10.0;
  double delta_radius = -1.0;
  // geodesic counting / spectrum density
  double l_max = 8.0;
  double epsilon = 0.05;
  double ratio_lo = 0.7;
  double ratio_hi = 1.3;
  bool compare_paths = false;
  std::string path = "auto";  // auto | axis | words
  int orbit_samples = 8;
  // mixing
  std::vector<double> t_grid = {0.0, 2.0, 4.0, 6.0, 8.0};
  std::size_t samples = 100'000;
  std::size_t bootstrap_rounds = 200;
  std::vector<double> phi_center;  // empty = basepoint
  double phi_radius = 1.0;         // <= 0 means the constant function 1
  std::vector<double> psi_center;
  double psi_radius = 1.0;
  // critical gap
  double gap_min = 0.3;
  double significance = 3.0;
  double cusp_r = 2.0;

  bool operator==(const ExperimentSpec&) const = default;
};

struct RunConfig {
  DomainSpec domain;
  GroupSpec group;
  RunSpec run;
  ExperimentSpec experiment;

  bool operator==(const RunConfig&) const = default;
};

// Parses the structured text: `[section]` headers, `key = value` lines, `#`
// comments.  Unknown sections or keys are hard errors naming the offender;
// malformed lines are reported with their line number.  All sections are
// optional; defaults fill the gaps.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

// Canonical serialization: every section and key, doubles at 17 significant
// digits, lists space-separated.
std::string serialize_config(const RunConfig& config);

}  // namespace hilbert
