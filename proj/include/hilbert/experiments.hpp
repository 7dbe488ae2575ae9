#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hilbert/geodesics.hpp"
#include "hilbert/measures.hpp"

namespace hilbert {

// One named check inside an experiment.  `criterion` is a stable slug such
// as "orbit-counting/slope-within-expected" so downstream tooling can key on
// it; `details` carries the measured numbers in human-readable form.
struct Verdict {
  std::string criterion;
  bool pass = false;
  std::string details;
};

struct NamedFit {
  std::string name;
  double value = 0.0;
  double stderr_value = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

// Rectangular numeric table; rows are emitted in sweep order, monotone in
// the sweep column.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  std::string id;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Table> tables;
  std::vector<NamedFit> fits;
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;

  bool all_pass() const;
  const Table* table(const std::string& name) const;
  const NamedFit* fit(const std::string& name) const;
  const Verdict* verdict(const std::string& criterion) const;
};

// ---------------------------------------------------------------------------
// Orbit counting.  Tabulates N(t) = #{gamma : d(x, gamma y) <= t} on a
// quarter-unit grid, fits the growth exponent over the top half, and checks
// the normalized ratio N(t) e^{-delta t} for stability over the final
// window.
struct OrbitCountingParams {
  double t_max = 12.0;
  double expected_delta = 1.0;  // <= 0 disables the slope verdict
  double delta_tol = 0.05;
  double spread_tol = 0.5;   // relative spread of the normalized ratio
  double margin = -1.0;      // enumeration margin; < 0 picks the default
  std::size_t cap = 20'000'000;
};

ExperimentResult run_orbit_counting(const GroupPresentation& group,
                                    const Vec& x, const Vec& y,
                                    const OrbitCountingParams& params = {});

// ---------------------------------------------------------------------------
// Orbit-pair equidistribution.  For t in the sweep window forms
//   nu_t = delta * m * e^{-delta t} sum_{d(x,gamma y) <= t}
//            Dirac(gamma y) (x) Dirac(gamma^-1 x)
// and compares nu_t(A x B) / nu_t(all) against mu_x(A) mu_y(B) from the
// atomic measure surrogates.  Cap membership is evaluated on the orbit
// points directly (angular caps read as solid cones).
struct CapSpec {
  Vec axis;             // size 0 means the whole boundary
  double angle = 0.0;   // half-opening angle in radians
};

struct EquidistributionParams {
  double t_max = 9.0;
  double t_window = 3.0;        // sweep covers [t_max - t_window, t_max]
  CapSpec cap_a;
  CapSpec cap_b;
  double s_offset = 0.05;       // measures built at s = delta_hat + s_offset
  double measure_radius = 10.0;
  double delta_radius = -1.0;   // radius for the exponent fit; < 0: default
  double cauchy_shrink = 0.30;  // required per-step decay of differences
  std::uint64_t seed = 0;
  std::size_t mc_pairs = 20'000;  // Monte-Carlo pairs for the total-mass fit
  double margin = -1.0;
  std::size_t cap = 20'000'000;
};

ExperimentResult run_orbit_equidistribution(
    const GroupPresentation& group, const Vec& x, const Vec& y,
    const EquidistributionParams& params = {});

// ---------------------------------------------------------------------------
// Primitive closed geodesic counting.  Runs the census up to l_max,
// tabulates the cumulative count G(l) against e^{delta l}/(delta l), and
// checks the normalized ratio lands in [ratio_lo, ratio_hi] and drifts
// toward 1.  With compare_paths set, both census paths run and must agree
// exactly on lengths (the free-word path needs the assume_free flag).
struct GeodesicCountingParams {
  double l_max = 8.0;
  double ratio_lo = 0.7;
  double ratio_hi = 1.3;
  bool compare_paths = false;
  CensusPath path = CensusPath::Auto;
  double delta_radius = -1.0;  // < 0: max(10, l_max + 1)
  int orbit_samples = 8;       // per class, for the spatial sample table
  std::uint64_t seed = 0;
  double margin = -1.0;
  std::size_t cap = 20'000'000;
};

ExperimentResult run_geodesic_counting(const GroupPresentation& group,
                                       const GeodesicCountingParams& params = {});

// ---------------------------------------------------------------------------
// Mixing correlation.  Test observables are indicator balls on the quotient,
// read through the footpoint after reduction to the Dirichlet domain; a
// non-positive radius denotes the constant function 1.
struct BallIndicator {
  Vec center;          // size 0 means centered at the basepoint
  double radius = 1.0;
};

struct MixingParams {
  std::vector<double> t_grid = {0.0, 2.0, 4.0, 6.0, 8.0};
  std::size_t samples = 100'000;
  BallIndicator phi;
  BallIndicator psi;
  double s_offset = 0.05;
  double measure_radius = 10.0;
  double delta_radius = -1.0;
  std::uint64_t seed = 0;
  std::size_t bootstrap_rounds = 200;
  double margin = -1.0;
};

ExperimentResult run_mixing_correlation(const GroupPresentation& group,
                                        const Vec& o,
                                        const MixingParams& params = {});

// ---------------------------------------------------------------------------
// Length spectrum density.  Takes all primitive class lengths up to l_max,
// forms the integer combinations c1 l_i + c2 l_j mod 1 with coefficients in
// [-3, 3], and measures the largest circular gap; the verdict asks for gap
// < epsilon at l_max and a nonincreasing gap across the sub-sweep.
struct SpectrumDensityParams {
  double l_max = 8.0;
  double epsilon = 0.05;
  CensusPath path = CensusPath::Auto;
  double margin = -1.0;
  std::size_t cap = 20'000'000;
};

ExperimentResult run_length_spectrum_density(
    const GroupPresentation& group, const SpectrumDensityParams& params = {});

// ---------------------------------------------------------------------------
// Critical gap.  Compares the full growth exponent against the exponent of
// the subgroup generated by the marked (parabolic) generators and evaluates
// the cusp shell series at the full exponent.  An empty marker is refused:
// the gap against the trivial subgroup carries no content.
struct CriticalGapParams {
  std::vector<int> parabolic_marker;
  double R = 12.0;
  double gap_min = 0.3;
  double significance = 3.0;  // required (gap - gap_min) / stderr
  double cusp_r = 2.0;
  double margin = -1.0;
  std::size_t cap = 20'000'000;
};

ExperimentResult run_critical_gap(const GroupPresentation& group, const Vec& x,
                                  const CriticalGapParams& params = {});

}  // namespace hilbert
