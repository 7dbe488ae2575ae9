#include "hilbert/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hilbert/classify.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/numerics.hpp"

namespace hilbert {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void put(ExperimentResult& r, const std::string& key, double v) {
  r.config.emplace_back(key, fmt_g(v));
}
void put(ExperimentResult& r, const std::string& key, std::size_t v) {
  r.config.emplace_back(key, std::to_string(v));
}
void put(ExperimentResult& r, const std::string& key, const std::string& v) {
  r.config.emplace_back(key, v);
}

// Quarter-unit grid 0, 0.25, ..., t_max (t_max appended when not on the
// lattice), so sweep tables are monotone by construction.
std::vector<double> quarter_grid(double t_max, double step) {
  std::vector<double> grid;
  const int n = static_cast<int>(std::floor(t_max / step + 1e-9));
  grid.reserve(static_cast<std::size_t>(n) + 2);
  for (int k = 0; k <= n; ++k) grid.push_back(step * k);
  if (grid.back() < t_max - 1e-9) grid.push_back(t_max);
  return grid;
}

std::vector<std::size_t> cumulative_counts(const std::vector<double>& sorted_d,
                                           const std::vector<double>& grid) {
  std::vector<std::size_t> out;
  out.reserve(grid.size());
  for (double t : grid) {
    out.push_back(static_cast<std::size_t>(
        std::upper_bound(sorted_d.begin(), sorted_d.end(), t + 1e-12) -
        sorted_d.begin()));
  }
  return out;
}

SlopeFit log_count_fit(const std::vector<double>& grid,
                       const std::vector<std::size_t>& counts, double lo,
                       double hi) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < lo - 1e-12 || grid[i] > hi + 1e-12 || counts[i] == 0)
      continue;
    xs.push_back(grid[i]);
    ys.push_back(std::log(static_cast<double>(counts[i])));
  }
  if (xs.size() < 3)
    throw ResourceError(
        "growth fit window has fewer than 3 populated grid points; enlarge "
        "the radius");
  return fit_line(xs, ys);
}

BoundarySet make_cap(const CapSpec& spec, const char* which) {
  if (spec.axis.size() == 0) return BoundarySet::whole();
  if (!(spec.angle > 0.0))
    throw ArgumentError(std::string("cap ") + which +
                        " has a nonpositive opening angle");
  return BoundarySet::angular_cap(spec.axis, spec.angle);
}

void require_interior(const ConvexDomain& dom, const Vec& p,
                      const char* name) {
  if (p.size() != dom.chart().affine_dim() || !dom.contains(p))
    throw ArgumentError(std::string(name) +
                        " must be an interior point of the domain");
}

}  // namespace

bool ExperimentResult::all_pass() const {
  for (const Verdict& v : verdicts)
    if (!v.pass) return false;
  return true;
}

const Table* ExperimentResult::table(const std::string& name) const {
  for (const Table& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

const NamedFit* ExperimentResult::fit(const std::string& name) const {
  for (const NamedFit& f : fits)
    if (f.name == name) return &f;
  return nullptr;
}

const Verdict* ExperimentResult::verdict(const std::string& criterion) const {
  for (const Verdict& v : verdicts)
    if (v.criterion == criterion) return &v;
  return nullptr;
}

// ---------------------------------------------------------------------------

ExperimentResult run_orbit_counting(const GroupPresentation& group,
                                    const Vec& x, const Vec& y,
                                    const OrbitCountingParams& params) {
  Stopwatch watch;
  if (!(params.t_max > 0.0))
    throw ArgumentError("orbit counting needs t_max > 0");
  const ConvexDomain& dom = group.domain();
  require_interior(dom, x, "x");
  require_interior(dom, y, "y");
  const AffineChart& chart = dom.chart();
  const double dxy = hilbert_distance_affine(dom, x, y);
  const bool same_point = (x - y).lpNorm<Eigen::Infinity>() == 0.0;

  ExperimentResult r;
  r.id = "orbit-counting";
  put(r, "t_max", params.t_max);
  put(r, "expected_delta", params.expected_delta);
  put(r, "delta_tol", params.delta_tol);
  put(r, "spread_tol", params.spread_tol);
  put(r, "margin", params.margin);
  put(r, "cap", params.cap);
  put(r, "d_x_y", dxy);

  EnumerationOptions eopt;
  eopt.cap = params.cap;
  eopt.margin = params.margin;
  eopt.keep_words = false;

  const Vec ylift = chart.lift(y);
  std::vector<double> dists;
  for_each_in_ball(group, y, params.t_max + dxy, eopt,
                   [&](const BallVisit& v) {
                     // The counting function reads d(x, gamma y); the
                     // enumeration radius t_max + d(x,y) covers every such
                     // element by the triangle inequality.
                     double d = v.displacement;
                     if (!same_point) {
                       Vec p;
                       try {
                         p = chart.to_affine_raw(v.matrix * ylift);
                       } catch (const ChartError&) {
                         return;
                       }
                       try {
                         d = hilbert_distance_affine(dom, x, p);
                       } catch (const GeometryError&) {
                         return;
                       }
                     }
                     if (d <= params.t_max + 1e-12) dists.push_back(d);
                   });
  std::sort(dists.begin(), dists.end());

  const std::vector<double> grid = quarter_grid(params.t_max, 0.25);
  const std::vector<std::size_t> counts = cumulative_counts(dists, grid);
  const SlopeFit fit =
      log_count_fit(grid, counts, params.t_max / 2.0, params.t_max);
  const double delta = std::max(0.0, fit.slope);
  r.fits.push_back({"delta-hat", delta, fit.slope_stderr, params.t_max / 2.0,
                    params.t_max});

  Table tab;
  tab.name = "orbit-counts";
  tab.columns = {"t", "count", "ratio"};
  const double window_lo = std::max(params.t_max - 2.0, params.t_max / 2.0);
  double ratio_min = 0.0, ratio_max = 0.0, ratio_sum = 0.0;
  int ratio_n = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ratio =
        static_cast<double>(counts[i]) * std::exp(-delta * grid[i]);
    tab.rows.push_back(
        {grid[i], static_cast<double>(counts[i]), ratio});
    if (grid[i] >= window_lo - 1e-12 && counts[i] > 0) {
      if (ratio_n == 0) {
        ratio_min = ratio_max = ratio;
      } else {
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
      }
      ratio_sum += ratio;
      ++ratio_n;
    }
  }
  r.tables.push_back(std::move(tab));

  if (params.expected_delta > 0.0) {
    const double err = std::abs(delta - params.expected_delta);
    r.verdicts.push_back(
        {"orbit-counting/slope-within-expected", err <= params.delta_tol,
         "delta_hat = " + fmt_short(delta) + ", expected " +
             fmt_short(params.expected_delta) + " +- " +
             fmt_short(params.delta_tol) + " (stderr " +
             fmt_short(fit.slope_stderr) + ")"});
  }
  const double spread =
      ratio_n > 0 ? (ratio_max - ratio_min) / (ratio_sum / ratio_n)
                  : std::numeric_limits<double>::infinity();
  r.verdicts.push_back(
      {"orbit-counting/normalized-ratio-spread", spread <= params.spread_tol,
       "relative spread of N(t) e^{-delta t} over [" + fmt_short(window_lo) +
           ", " + fmt_short(params.t_max) + "] = " + fmt_short(spread) +
           ", tolerance " + fmt_short(params.spread_tol)});

  r.wall_seconds = watch.seconds();
  return r;
}

// ---------------------------------------------------------------------------

ExperimentResult run_orbit_equidistribution(
    const GroupPresentation& group, const Vec& x, const Vec& y,
    const EquidistributionParams& params) {
  Stopwatch watch;
  if (!(params.t_max > 0.0) || !(params.t_window > 0.0) ||
      params.t_window > params.t_max)
    throw ArgumentError("equidistribution needs 0 < t_window <= t_max");
  const ConvexDomain& dom = group.domain();
  require_interior(dom, x, "x");
  require_interior(dom, y, "y");
  const AffineChart& chart = dom.chart();
  const double dxy = hilbert_distance_affine(dom, x, y);
  const bool same_point = (x - y).lpNorm<Eigen::Infinity>() == 0.0;

  const BoundarySet cap_a = make_cap(params.cap_a, "A");
  const BoundarySet cap_b = make_cap(params.cap_b, "B");
  const BoundarySet whole = BoundarySet::whole();

  ExperimentResult r;
  r.id = "orbit-equidistribution";
  put(r, "t_max", params.t_max);
  put(r, "t_window", params.t_window);
  put(r, "s_offset", params.s_offset);
  put(r, "measure_radius", params.measure_radius);
  put(r, "cauchy_shrink", params.cauchy_shrink);
  put(r, "seed", static_cast<std::size_t>(params.seed));
  put(r, "mc_pairs", params.mc_pairs);
  put(r, "cap_a",
      params.cap_a.axis.size() == 0
          ? std::string("whole")
          : "cone(angle " + fmt_short(params.cap_a.angle) + ")");
  put(r, "cap_b",
      params.cap_b.axis.size() == 0
          ? std::string("whole")
          : "cone(angle " + fmt_short(params.cap_b.angle) + ")");

  EnumerationOptions eopt;
  eopt.cap = params.cap;
  eopt.margin = params.margin;
  eopt.keep_words = false;

  const double delta_radius =
      params.delta_radius > 0.0 ? params.delta_radius
                                : std::max(10.0, params.t_max);
  const CriticalExponentEstimate est = estimate_critical_exponent(
      group, x, delta_radius, ExponentMethod::Slope, eopt);
  const double delta = est.delta_hat;
  if (!(delta > 0.0))
    throw NumericalError(
        "growth exponent estimate vanished; equidistribution normalization "
        "is undefined");
  r.fits.push_back({"delta-hat", delta, est.stderr_value, est.window_lo,
                    est.window_hi});

  // Reference measures: both carried by the orbit of y, weighted at x and
  // at y respectively, matching the two tensor factors.
  const double s = delta + params.s_offset;
  const AtomicMeasure mu_x = patterson_sullivan(group, y, x, s,
                                                params.measure_radius, delta,
                                                eopt);
  const AtomicMeasure mu_y = patterson_sullivan(group, y, y, s,
                                                params.measure_radius, delta,
                                                eopt);
  const double mass_a = set_mass(mu_x, cap_a) / mu_x.total_mass();
  const double mass_b = set_mass(mu_y, cap_b) / mu_y.total_mass();
  if (!(mass_a > 0.0))
    throw ArgumentError(
        "cap A carries no sampled measure mass; choose a cap meeting the "
        "limit set");
  if (!(mass_b > 0.0))
    throw ArgumentError(
        "cap B carries no sampled measure mass; choose a cap meeting the "
        "limit set");
  r.fits.push_back({"cap-a-mass", mass_a, 0.0, 0.0, 0.0});
  r.fits.push_back({"cap-b-mass", mass_b, 0.0, 0.0, 0.0});

  // Total-mass surrogate via importance sampling of the pair density
  // e^{2 delta <xi,eta>_x} against mu_x x mu_y.
  {
    std::vector<double> wx, wy;
    std::vector<Vec> ax, ay;
    for (const Atom& a : mu_x.atoms) {
      wx.push_back(a.weight);
      ax.push_back(chart.to_affine(a.point));
    }
    for (const Atom& a : mu_y.atoms) {
      wy.push_back(a.weight);
      ay.push_back(chart.to_affine(a.point));
    }
    std::vector<double> d_x_to_ay(ay.size());
    for (std::size_t j = 0; j < ay.size(); ++j)
      d_x_to_ay[j] = hilbert_distance_affine(dom, x, ay[j]);
    std::vector<double> d_x_to_ax(ax.size());
    for (std::size_t i = 0; i < ax.size(); ++i)
      d_x_to_ax[i] = hilbert_distance_affine(dom, x, ax[i]);
    WeightedSampler sampler_x(wx), sampler_y(wy);
    SplitMix64 rng = stream_rng(params.seed, 1);
    std::vector<double> density;
    density.reserve(params.mc_pairs);
    for (std::size_t k = 0; k < params.mc_pairs; ++k) {
      const std::size_t i = sampler_x.sample(rng);
      const std::size_t j = sampler_y.sample(rng);
      if ((ax[i] - ay[j]).lpNorm<Eigen::Infinity>() < 1e-12) continue;
      double dij;
      try {
        dij = hilbert_distance_affine(dom, ax[i], ay[j]);
      } catch (const GeometryError&) {
        continue;
      }
      const double gp =
          std::max(0.0, 0.5 * (d_x_to_ax[i] + d_x_to_ay[j] - dij));
      density.push_back(std::exp(2.0 * delta * gp));
    }
    if (density.empty())
      throw NumericalError("total-mass sampler produced no admissible pairs");
    const double mean = pairwise_sum(density) /
                        static_cast<double>(density.size());
    double sq = 0.0;
    for (double v : density) sq += (v - mean) * (v - mean);
    const double se = std::sqrt(sq) / static_cast<double>(density.size());
    const double m_norm = mean * mu_x.total_mass() * mu_y.total_mass();
    r.fits.push_back({"bms-mass-mc", m_norm,
                      se * mu_x.total_mass() * mu_y.total_mass(), 0.0, 0.0});
  }
  const double m_norm = r.fit("bms-mass-mc")->value;

  // Orbit sweep: per element gamma with d(x, gamma y) <= t_max record the
  // distance and the cap memberships of gamma y and gamma^-1 x.
  struct Rec {
    double d;
    bool in_a, in_b, whole_a, whole_b;
  };
  std::vector<Rec> recs;
  std::vector<double> dists;
  const Vec ylift = chart.lift(y);
  const Vec xlift = chart.lift(x);
  for_each_in_ball(
      group, y, params.t_max + dxy, eopt, [&](const BallVisit& v) {
        Vec p;
        try {
          p = chart.to_affine_raw(v.matrix * ylift);
        } catch (const ChartError&) {
          return;
        }
        double d = v.displacement;
        if (!same_point) {
          try {
            d = hilbert_distance_affine(dom, x, p);
          } catch (const GeometryError&) {
            return;
          }
        }
        if (d > params.t_max + 1e-12) return;
        dists.push_back(d);
        Rec rec{d, false, false, false, false};
        const HomogeneousPoint hp = chart.to_projective(p);
        rec.in_a = cap_a.contains(hp);
        rec.whole_a = whole.contains(hp);
        try {
          const Vec q = chart.to_affine_raw(v.matrix.inverse() * xlift);
          const HomogeneousPoint hq = chart.to_projective(q);
          rec.in_b = cap_b.contains(hq);
          rec.whole_b = whole.contains(hq);
        } catch (const ChartError&) {
          // Drops from the pair tally but stays in the counting column, so
          // a genuine chart escape surfaces in the consistency verdict.
        }
        recs.push_back(rec);
      });
  std::sort(dists.begin(), dists.end());
  std::sort(recs.begin(), recs.end(),
            [](const Rec& a, const Rec& b) { return a.d < b.d; });

  const double sweep_lo = params.t_max - params.t_window;
  std::vector<double> grid;
  for (double t = sweep_lo; t <= params.t_max + 1e-9; t += 0.5)
    grid.push_back(std::min(t, params.t_max));
  const std::vector<std::size_t> n_counts = cumulative_counts(dists, grid);

  Table tab;
  tab.name = "equidistribution-sweep";
  tab.columns = {"t",     "pairs_ab", "count", "nu_ab",
                 "ratio", "cauchy"};
  bool full_matches = true;
  std::vector<double> ratios, diffs;
  std::size_t idx = 0, pairs_ab = 0, pairs_ww = 0;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double t = grid[gi];
    while (idx < recs.size() && recs[idx].d <= t + 1e-12) {
      if (recs[idx].in_a && recs[idx].in_b) ++pairs_ab;
      if (recs[idx].whole_a && recs[idx].whole_b) ++pairs_ww;
      ++idx;
    }
    const std::size_t n = n_counts[gi];
    if (pairs_ww != n) full_matches = false;
    const double nu_ab = delta * m_norm * std::exp(-delta * t) *
                         static_cast<double>(pairs_ab);
    const double ratio =
        n == 0 ? 0.0
               : (static_cast<double>(pairs_ab) / static_cast<double>(n)) /
                     (mass_a * mass_b);
    const double cauchy =
        ratios.empty() ? 0.0 : std::abs(ratio - ratios.back());
    if (!ratios.empty()) diffs.push_back(cauchy);
    ratios.push_back(ratio);
    tab.rows.push_back({t, static_cast<double>(pairs_ab),
                        static_cast<double>(n), nu_ab, ratio, cauchy});
  }
  r.tables.push_back(std::move(tab));

  r.verdicts.push_back(
      {"equidistribution/full-cap-matches-counting", full_matches,
       full_matches ? "whole-boundary pair tally equals N(t) at every sweep "
                      "point"
                    : "whole-boundary pair tally diverged from N(t)"});

  bool shrinks = true;
  std::string detail;
  if (diffs.size() >= 2) {
    const double first = diffs.front();
    const double last = diffs.back();
    const double span = grid.back() - grid[1];
    if (first < 1e-12 && last < 1e-12) {
      detail = "differences already at zero";
    } else if (first < 1e-12 || span <= 0.0) {
      shrinks = last < 1e-12;
      detail = "degenerate difference sequence";
    } else {
      const double factor = std::pow(last / first, 1.0 / span);
      shrinks = factor <= 1.0 - params.cauchy_shrink + 1e-9;
      detail = "per-unit-t decay factor " + fmt_short(factor) +
               ", required <= " + fmt_short(1.0 - params.cauchy_shrink);
    }
  } else {
    shrinks = false;
    detail = "sweep too short for a decay estimate";
  }
  r.verdicts.push_back(
      {"equidistribution/cauchy-differences-shrink", shrinks, detail});

  r.wall_seconds = watch.seconds();
  return r;
}

// ---------------------------------------------------------------------------

ExperimentResult run_geodesic_counting(const GroupPresentation& group,
                                       const GeodesicCountingParams& params) {
  Stopwatch watch;
  if (!(params.l_max > 0.0))
    throw ArgumentError("geodesic counting needs l_max > 0");
  const ConvexDomain& dom = group.domain();
  const Vec o = dom.center();

  ExperimentResult r;
  r.id = "geodesic-counting";
  put(r, "l_max", params.l_max);
  put(r, "ratio_lo", params.ratio_lo);
  put(r, "ratio_hi", params.ratio_hi);
  put(r, "compare_paths", std::string(params.compare_paths ? "true" : "false"));
  put(r, "orbit_samples", static_cast<std::size_t>(
                              params.orbit_samples > 0 ? params.orbit_samples
                                                       : 0));
  put(r, "seed", static_cast<std::size_t>(params.seed));
  put(r, "cap", params.cap);

  GeodesicEnumOptions gopt;
  gopt.path = params.path;
  gopt.cap = params.cap;
  gopt.margin = params.margin;
  const std::vector<ClosedGeodesic> census =
      enumerate_primitive_geodesics(group, params.l_max, gopt);
  if (census.empty())
    throw ResourceError("no primitive closed geodesics up to length " +
                        fmt_short(params.l_max) + "; enlarge l_max");
  std::vector<double> lengths;
  lengths.reserve(census.size());
  for (const ClosedGeodesic& g : census) lengths.push_back(g.length);
  // Census output is sorted by length already; keep the invariant explicit.
  std::sort(lengths.begin(), lengths.end());

  const double delta_radius = params.delta_radius > 0.0
                                  ? params.delta_radius
                                  : std::max(10.0, params.l_max + 1.0);
  EnumerationOptions eopt;
  eopt.cap = params.cap;
  eopt.keep_words = false;
  const CriticalExponentEstimate est = estimate_critical_exponent(
      group, o, delta_radius, ExponentMethod::Slope, eopt);
  const double delta = est.delta_hat;
  if (!(delta > 0.0))
    throw NumericalError("growth exponent estimate vanished; the geodesic "
                         "ratio is undefined");
  r.fits.push_back({"delta-hat", delta, est.stderr_value, est.window_lo,
                    est.window_hi});
  r.fits.push_back({"systole", lengths.front(), 0.0, 0.0, 0.0});
  put(r, "classes", lengths.size());

  const double start =
      std::ceil(lengths.front() * 2.0) / 2.0;  // first half-unit tick
  std::vector<double> grid;
  for (double l = start; l <= params.l_max + 1e-9; l += 0.5)
    grid.push_back(std::min(l, params.l_max));
  if (grid.empty() || grid.back() < params.l_max - 1e-9)
    grid.push_back(params.l_max);

  Table tab;
  tab.name = "geodesic-counts";
  tab.columns = {"l", "count", "ratio"};
  double ratio_final = 0.0, ratio_ref = -1.0;
  for (double l : grid) {
    const std::size_t count = static_cast<std::size_t>(
        std::upper_bound(lengths.begin(), lengths.end(), l + 1e-9) -
        lengths.begin());
    const double ratio =
        static_cast<double>(count) * delta * l * std::exp(-delta * l);
    tab.rows.push_back({l, static_cast<double>(count), ratio});
    ratio_final = ratio;
    if (l <= params.l_max - 2.0 + 1e-9 && count > 0) ratio_ref = ratio;
  }
  r.tables.push_back(std::move(tab));

  r.verdicts.push_back(
      {"geodesic-counting/ratio-in-band",
       ratio_final >= params.ratio_lo && ratio_final <= params.ratio_hi,
       "count(l) * delta l e^{-delta l} = " + fmt_short(ratio_final) +
           " at l = " + fmt_short(params.l_max) + ", band [" +
           fmt_short(params.ratio_lo) + ", " + fmt_short(params.ratio_hi) +
           "]"});
  if (ratio_ref >= 0.0) {
    const bool drift =
        std::abs(ratio_final - 1.0) <= std::abs(ratio_ref - 1.0) + 0.05;
    r.verdicts.push_back(
        {"geodesic-counting/ratio-drifts-toward-one", drift,
         "|ratio - 1| moved " + fmt_short(std::abs(ratio_ref - 1.0)) +
             " -> " + fmt_short(std::abs(ratio_final - 1.0)) +
             " over the last two length units"});
  } else {
    r.verdicts.push_back({"geodesic-counting/ratio-drifts-toward-one", true,
                          "window shorter than two length units; drift check "
                          "vacuous"});
  }

  if (params.compare_paths) {
    GeodesicEnumOptions axis = gopt;
    axis.path = CensusPath::Axis;
    GeodesicEnumOptions words = gopt;
    words.path = CensusPath::FreeWords;
    const std::vector<ClosedGeodesic> via_axis =
        enumerate_primitive_geodesics(group, params.l_max, axis);
    const std::vector<ClosedGeodesic> via_words =
        enumerate_primitive_geodesics(group, params.l_max, words);
    bool agree = via_axis.size() == via_words.size();
    double worst = 0.0;
    if (agree) {
      for (std::size_t i = 0; i < via_axis.size(); ++i)
        worst = std::max(worst, std::abs(via_axis[i].length -
                                         via_words[i].length));
      agree = worst <= 1e-9;
    }
    r.verdicts.push_back(
        {"geodesic-counting/census-paths-agree", agree,
         "axis path found " + std::to_string(via_axis.size()) +
             " classes, word path " + std::to_string(via_words.size()) +
             (agree ? ", largest length gap " + fmt_short(worst) : "")});
  }

  if (params.orbit_samples > 0) {
    const AffineChart& chart = dom.chart();
    const DirichletReducer reducer(group, o);
    SplitMix64 rng = stream_rng(params.seed, 5);
    const int k = params.orbit_samples;
    // Uniform-on-orbit sampling: k equispaced arc positions per class with a
    // random common phase, weighted by class length in the running average.
    struct ClassSample {
      double length;
      double hits;
    };
    std::vector<ClassSample> samples;
    samples.reserve(census.size());
    for (const ClosedGeodesic& g : census) {
      const double phase = rng.uniform01();
      Vec bwd, fwd;
      try {
        bwd = chart.to_affine(g.backward);
        fwd = chart.to_affine(g.forward);
      } catch (const ChartError&) {
        continue;
      }
      const Vec mid = 0.5 * (bwd + fwd);
      double hits = 0.0;
      for (int i = 0; i < k; ++i) {
        const double tau = g.length * ((i + phase) / k);
        try {
          const Vec p = geodesic_point_affine(dom, mid, fwd, tau);
          const Vec reduced = reducer.reduce(p).first;
          if (hilbert_distance_affine(dom, o, reduced) <= 1.0) hits += 1.0;
        } catch (const GeometryError&) {
          continue;
        }
      }
      samples.push_back({g.length, hits / k});
    }
    Table spatial;
    spatial.name = "orbit-samples";
    spatial.columns = {"l", "classes", "ball_fraction"};
    for (double l : grid) {
      double num = 0.0, den = 0.0;
      std::size_t classes = 0;
      for (const ClassSample& cs : samples) {
        if (cs.length > l + 1e-9) break;
        num += cs.length * cs.hits;
        den += cs.length;
        ++classes;
      }
      spatial.rows.push_back(
          {l, static_cast<double>(classes), den > 0.0 ? num / den : 0.0});
    }
    r.tables.push_back(std::move(spatial));
  }

  r.wall_seconds = watch.seconds();
  return r;
}

// ---------------------------------------------------------------------------

ExperimentResult run_mixing_correlation(const GroupPresentation& group,
                                        const Vec& o,
                                        const MixingParams& params) {
  Stopwatch watch;
  const ConvexDomain& dom = group.domain();
  require_interior(dom, o, "o");
  if (params.samples < 10)
    throw ArgumentError("mixing needs at least 10 samples");
  if (params.t_grid.empty())
    throw ArgumentError("mixing needs a nonempty time grid");
  if (group.flags().expects_parabolics)
    throw ArgumentError(
        "mixing sampler needs a cocompact action; the presentation flags "
        "parabolics");
  for (int i = 0; i < group.generator_count(); ++i) {
    const SpectralData sd =
        classify(ProjectiveTransform(group.generator(i)), dom);
    if (sd.type == IsometryClass::Parabolic)
      throw ArgumentError("generator " + group.label(i) +
                          " is parabolic; the mixing sampler needs a "
                          "cocompact action");
  }

  ExperimentResult r;
  r.id = "mixing-correlation";
  put(r, "samples", params.samples);
  put(r, "s_offset", params.s_offset);
  put(r, "measure_radius", params.measure_radius);
  put(r, "seed", static_cast<std::size_t>(params.seed));
  put(r, "bootstrap_rounds", params.bootstrap_rounds);

  std::vector<double> grid = params.t_grid;
  std::sort(grid.begin(), grid.end());
  const std::size_t T = grid.size();

  EnumerationOptions eopt;
  eopt.margin = params.margin;
  eopt.keep_words = false;
  const double delta_radius = params.delta_radius > 0.0
                                  ? params.delta_radius
                                  : params.measure_radius;
  const CriticalExponentEstimate est = estimate_critical_exponent(
      group, o, delta_radius, ExponentMethod::Slope, eopt);
  const double delta = est.delta_hat;
  if (!(delta > 0.0))
    throw NumericalError("growth exponent estimate vanished");
  r.fits.push_back({"delta-hat", delta, est.stderr_value, est.window_lo,
                    est.window_hi});

  const AtomicMeasure mu = patterson_sullivan(
      group, o, o, delta + params.s_offset, params.measure_radius, delta,
      eopt);
  if (mu.atoms.size() < 2)
    throw ResourceError("measure surrogate has fewer than two atoms; enlarge "
                        "the measure radius");
  put(r, "atoms", mu.atoms.size());

  const AffineChart& chart = dom.chart();
  std::vector<Vec> pts;
  std::vector<double> disp, weights;
  pts.reserve(mu.atoms.size());
  for (const Atom& a : mu.atoms) {
    pts.push_back(chart.to_affine(a.point));
    disp.push_back(a.displacement);
    weights.push_back(a.weight);
  }

  const DirichletReducer reducer(group, o);
  const bool phi_const = params.phi.radius <= 0.0;
  const bool psi_const = params.psi.radius <= 0.0;
  const Vec phi_center = params.phi.center.size() ? params.phi.center : o;
  const Vec psi_center = params.psi.center.size() ? params.psi.center : o;
  if (!phi_const) require_interior(dom, phi_center, "phi center");
  if (!psi_const) require_interior(dom, psi_center, "psi center");
  put(r, "phi", phi_const ? std::string("const 1")
                          : "ball(r " + fmt_short(params.phi.radius) + ")");
  put(r, "psi", psi_const ? std::string("const 1")
                          : "ball(r " + fmt_short(params.psi.radius) + ")");

  // Pairs of atoms stand in for the two geodesic endpoints; the importance
  // weight corrects the w_i w_j sampling density to the pair density
  // e^{2 delta <.,.>_o}, and the unit time slab fixes the flow coordinate.
  WeightedSampler sampler(weights);
  SplitMix64 rng = stream_rng(params.seed, 3);
  std::vector<double> rho;
  std::vector<std::uint8_t> psi_bit;
  std::vector<std::uint8_t> phi_bits;  // samples x T, row-major
  rho.reserve(params.samples);
  psi_bit.reserve(params.samples);
  phi_bits.reserve(params.samples * T);
  for (std::size_t kk = 0; kk < params.samples; ++kk) {
    const std::size_t i = sampler.sample(rng);
    const std::size_t j = sampler.sample(rng);
    const double u = rng.uniform01();
    if (i == j) continue;
    if ((pts[i] - pts[j]).lpNorm<Eigen::Infinity>() < 1e-12) continue;
    double dij;
    try {
      dij = hilbert_distance_affine(dom, pts[i], pts[j]);
    } catch (const GeometryError&) {
      continue;
    }
    const double gp = std::max(0.0, 0.5 * (disp[i] + disp[j] - dij));
    std::optional<UnitTangent> vt;
    try {
      vt = tangent_through(dom, pts[i], pts[j] - pts[i]);
    } catch (const GeometryError&) {
      continue;
    }
    UnitTangent& v = *vt;
    v.time = u;  // canonical clock: start inside the unit slab
    std::uint8_t psi_v = 1;
    if (!psi_const) {
      const Vec p0 = reducer.reduce(footpoint(dom, v)).first;
      psi_v = hilbert_distance_affine(dom, psi_center, p0) <=
                      params.psi.radius
                  ? 1
                  : 0;
    }
    bool ok = true;
    std::vector<std::uint8_t> row(T, 1);
    for (std::size_t ti = 0; ti < T && ok; ++ti) {
      if (phi_const) continue;
      UnitTangent vt = v;
      vt.time = u + grid[ti];
      try {
        const Vec pt = reducer.reduce(footpoint(dom, vt)).first;
        row[ti] = hilbert_distance_affine(dom, phi_center, pt) <=
                          params.phi.radius
                      ? 1
                      : 0;
      } catch (const GeometryError&) {
        ok = false;
      }
    }
    if (!ok) continue;
    rho.push_back(std::exp(2.0 * delta * gp));
    psi_bit.push_back(psi_v);
    phi_bits.insert(phi_bits.end(), row.begin(), row.end());
  }
  const std::size_t n = rho.size();
  if (n < 10) throw NumericalError("mixing sampler kept fewer than 10 pairs");
  put(r, "kept_samples", n);

  // Headline estimates via cascade sums over the stored per-sample terms.
  std::vector<double> tmp(n);
  const double s_rho = pairwise_sum(rho);
  for (std::size_t kk = 0; kk < n; ++kk) tmp[kk] = rho[kk] * psi_bit[kk];
  const double mean_psi = pairwise_sum(tmp) / s_rho;

  Table tab;
  tab.name = "mixing";
  tab.columns = {"t",          "correlation", "mean_phi",
                 "mean_psi",   "difference",  "stderr"};
  std::vector<double> diff_t(T), se_t(T);
  for (std::size_t ti = 0; ti < T; ++ti) {
    for (std::size_t kk = 0; kk < n; ++kk)
      tmp[kk] = rho[kk] * phi_bits[kk * T + ti];
    const double mean_phi = pairwise_sum(tmp) / s_rho;
    for (std::size_t kk = 0; kk < n; ++kk)
      tmp[kk] = rho[kk] * phi_bits[kk * T + ti] * psi_bit[kk];
    const double corr = pairwise_sum(tmp) / s_rho;
    diff_t[ti] = corr - mean_phi * mean_psi;

    // Bootstrap over samples; plain accumulation is fine for an error bar.
    SplitMix64 brng = stream_rng(params.seed, 100 + ti);
    std::vector<double> boots;
    boots.reserve(params.bootstrap_rounds);
    for (std::size_t b = 0; b < params.bootstrap_rounds; ++b) {
      double br = 0.0, bphi = 0.0, bpsi = 0.0, bcorr = 0.0;
      for (std::size_t kk = 0; kk < n; ++kk) {
        const std::size_t pick = static_cast<std::size_t>(brng.below(n));
        const double w = rho[pick];
        const double ph = phi_bits[pick * T + ti];
        const double ps = psi_bit[pick];
        br += w;
        bphi += w * ph;
        bpsi += w * ps;
        bcorr += w * ph * ps;
      }
      boots.push_back(bcorr / br - (bphi / br) * (bpsi / br));
    }
    double bm = 0.0;
    for (double b : boots) bm += b;
    bm /= static_cast<double>(boots.size());
    double bs = 0.0;
    for (double b : boots) bs += (b - bm) * (b - bm);
    se_t[ti] = std::sqrt(bs / static_cast<double>(boots.size()));

    tab.rows.push_back({grid[ti], diff_t[ti] + mean_phi * mean_psi, mean_phi,
                        mean_psi, diff_t[ti], se_t[ti]});
  }
  r.tables.push_back(std::move(tab));

  // Constant-observable identity, evaluated through the same expressions:
  // with phi forced to 1 the normalized mean is exactly s_rho / s_rho = 1
  // and the difference cancels bitwise.
  {
    for (std::size_t kk = 0; kk < n; ++kk) tmp[kk] = rho[kk] * 1.0;
    const double mean_one = pairwise_sum(tmp) / s_rho;
    for (std::size_t kk = 0; kk < n; ++kk)
      tmp[kk] = rho[kk] * 1.0 * psi_bit[kk];
    const double corr_one = pairwise_sum(tmp) / s_rho;
    const double diff_one = corr_one - mean_one * mean_psi;
    r.verdicts.push_back(
        {"mixing/constant-observable-vanishes", diff_one == 0.0,
         "difference with phi = 1 is " + fmt_g(diff_one) +
             " (exact zero required)"});
  }

  const double final_diff = diff_t.back();
  const double final_se = se_t.back();
  const bool decorrelated =
      std::abs(final_diff) <= 3.0 * final_se ||
      (final_se == 0.0 && final_diff == 0.0);
  r.verdicts.push_back(
      {"mixing/decorrelates-at-final-time", decorrelated,
       "|corr - product| = " + fmt_short(std::abs(final_diff)) + " vs 3 x "
       "bootstrap stderr = " + fmt_short(3.0 * final_se) + " at t = " +
           fmt_short(grid.back())});

  r.wall_seconds = watch.seconds();
  return r;
}

// ---------------------------------------------------------------------------

ExperimentResult run_length_spectrum_density(
    const GroupPresentation& group, const SpectrumDensityParams& params) {
  Stopwatch watch;
  if (!(params.l_max > 0.0) || !(params.epsilon > 0.0))
    throw ArgumentError("spectrum density needs positive l_max and epsilon");

  ExperimentResult r;
  r.id = "length-spectrum-density";
  put(r, "l_max", params.l_max);
  put(r, "epsilon", params.epsilon);
  put(r, "cap", params.cap);

  GeodesicEnumOptions gopt;
  gopt.path = params.path;
  gopt.cap = params.cap;
  gopt.margin = params.margin;
  gopt.keep_words = false;
  const std::vector<ClosedGeodesic> census =
      enumerate_primitive_geodesics(group, params.l_max, gopt);
  std::vector<double> lengths;
  for (const ClosedGeodesic& g : census) {
    if (lengths.empty() || g.length > lengths.back() + 1e-12)
      lengths.push_back(g.length);
  }
  if (lengths.size() < 2)
    throw ResourceError(
        "length spectrum up to l_max has fewer than two distinct values; "
        "the density test is undefined");
  // The combination set only grows with more lengths, so capping at the 256
  // shortest keeps the sweep monotone while bounding the O(n^2) pair work.
  const std::size_t distinct_cap = 256;
  put(r, "distinct_cap", distinct_cap);
  put(r, "classes", census.size());

  Table tab;
  tab.name = "spectrum-mesh";
  tab.columns = {"l", "classes", "distinct", "combos", "mesh"};
  std::vector<double> sweep;
  for (double l = params.l_max - 2.0; l < params.l_max - 1e-9; l += 1.0)
    if (l > 0.0) sweep.push_back(l);
  sweep.push_back(params.l_max);
  double final_mesh = 1.0;
  bool nonincreasing = true;
  double prev_mesh = -1.0;
  for (double l : sweep) {
    std::vector<double> sub;
    for (double v : lengths) {
      if (v > l + 1e-9) break;
      sub.push_back(v);
      if (sub.size() >= distinct_cap) break;
    }
    std::size_t classes = 0;
    for (const ClosedGeodesic& g : census)
      if (g.length <= l + 1e-9) ++classes;
    if (sub.size() < 2) {
      tab.rows.push_back({l, static_cast<double>(classes),
                          static_cast<double>(sub.size()), 0.0, 1.0});
      prev_mesh = 1.0;
      continue;
    }
    std::vector<double> frac;
    frac.reserve(sub.size() * sub.size() * 49 / 2);
    for (std::size_t i = 0; i < sub.size(); ++i) {
      for (std::size_t j = i; j < sub.size(); ++j) {
        for (int c1 = -3; c1 <= 3; ++c1) {
          for (int c2 = -3; c2 <= 3; ++c2) {
            const double v = c1 * sub[i] + c2 * sub[j];
            frac.push_back(v - std::floor(v));
          }
        }
      }
    }
    std::sort(frac.begin(), frac.end());
    double mesh = frac.front() + 1.0 - frac.back();  // wraparound gap
    for (std::size_t i = 1; i < frac.size(); ++i)
      mesh = std::max(mesh, frac[i] - frac[i - 1]);
    if (prev_mesh >= 0.0 && mesh > prev_mesh + 1e-15) nonincreasing = false;
    prev_mesh = mesh;
    final_mesh = mesh;
    tab.rows.push_back({l, static_cast<double>(classes),
                        static_cast<double>(sub.size()),
                        static_cast<double>(frac.size()), mesh});
  }
  r.tables.push_back(std::move(tab));

  r.verdicts.push_back(
      {"length-spectrum/mesh-below-epsilon", final_mesh <= params.epsilon,
       "largest circular gap of the mod-1 combinations = " +
           fmt_short(final_mesh) + ", required <= " +
           fmt_short(params.epsilon)});
  r.verdicts.push_back(
      {"length-spectrum/mesh-nonincreasing", nonincreasing,
       nonincreasing ? "gap is nonincreasing across the length sweep"
                     : "gap grew while lengths accumulated"});

  r.wall_seconds = watch.seconds();
  return r;
}

// ---------------------------------------------------------------------------

ExperimentResult run_critical_gap(const GroupPresentation& group, const Vec& x,
                                  const CriticalGapParams& params) {
  Stopwatch watch;
  const ConvexDomain& dom = group.domain();
  require_interior(dom, x, "x");
  if (params.parabolic_marker.empty())
    throw ArgumentError(
        "empty parabolic marker: the gap against the trivial subgroup is "
        "vacuous");
  if (!(params.R > 4.0))
    throw ArgumentError("critical gap needs R > 4 for the radius sweep");

  std::vector<Mat> sub_gens;
  std::vector<std::string> sub_labels;
  for (int idx : params.parabolic_marker) {
    if (idx < 0 || idx >= group.generator_count())
      throw ArgumentError("parabolic marker index " + std::to_string(idx) +
                          " is out of range");
    const SpectralData sd =
        classify(ProjectiveTransform(group.generator(idx)), dom);
    if (sd.type != IsometryClass::Parabolic)
      throw ArgumentError("marked generator " + group.label(idx) +
                          " does not classify as parabolic");
    sub_gens.push_back(group.generator(idx));
    sub_labels.push_back(group.label(idx));
  }
  GroupPresentation::Flags sub_flags;
  sub_flags.expects_parabolics = true;
  const GroupPresentation sub(sub_gens, sub_labels, dom, sub_flags);

  ExperimentResult r;
  r.id = "critical-gap";
  put(r, "R", params.R);
  put(r, "gap_min", params.gap_min);
  put(r, "significance", params.significance);
  put(r, "cusp_r", params.cusp_r);
  put(r, "marked", params.parabolic_marker.size());

  EnumerationOptions eopt;
  eopt.cap = params.cap;
  eopt.margin = params.margin;
  eopt.keep_words = false;

  // Radius sweep for the full group; the sparse parabolic subgroup only
  // clears the fit's population floor at the top radius.
  Table tab;
  tab.name = "exponent-sweep";
  tab.columns = {"R", "delta_full", "stderr_full"};
  CriticalExponentEstimate full_est{};
  for (double rr : {params.R - 2.0, params.R - 1.0, params.R}) {
    const CriticalExponentEstimate e = estimate_critical_exponent(
        group, x, rr, ExponentMethod::Slope, eopt);
    tab.rows.push_back({rr, e.delta_hat, e.stderr_value});
    full_est = e;
  }
  r.tables.push_back(std::move(tab));
  const CriticalExponentEstimate sub_est = estimate_critical_exponent(
      sub, x, params.R, ExponentMethod::Slope, eopt);

  const double gap = full_est.delta_hat - sub_est.delta_hat;
  const double se = full_est.stderr_value + sub_est.stderr_value;
  r.fits.push_back({"delta-full", full_est.delta_hat, full_est.stderr_value,
                    full_est.window_lo, full_est.window_hi});
  r.fits.push_back({"delta-parabolic", sub_est.delta_hat,
                    sub_est.stderr_value, sub_est.window_lo,
                    sub_est.window_hi});
  r.fits.push_back({"gap", gap, se, 0.0, 0.0});

  const bool significant =
      gap > params.gap_min &&
      (se == 0.0 || (gap - params.gap_min) / se >= params.significance);
  r.verdicts.push_back(
      {"critical-gap/gap-significant", significant,
       "delta_full = " + fmt_short(full_est.delta_hat) +
           ", delta_parabolic = " + fmt_short(sub_est.delta_hat) +
           ", gap = " + fmt_short(gap) + " needs > " +
           fmt_short(params.gap_min) + " at " +
           fmt_short(params.significance) + " sigma (combined stderr " +
           fmt_short(se) + ")"});

  const CuspSeriesBound cusp =
      cusp_series_bound(group, params.parabolic_marker, x,
                        full_est.delta_hat, params.cusp_r, params.R);
  r.fits.push_back({"cusp-series-value", cusp.value, 0.0, 0.0, 0.0});
  r.verdicts.push_back(
      {"critical-gap/cusp-shells-decay", cusp.shells_decay,
       "shell sums of (d + 2r) e^{-delta d} " +
           std::string(cusp.shells_decay ? "decay" : "do not decay") +
           " at delta = " + fmt_short(full_est.delta_hat)});

  r.wall_seconds = watch.seconds();
  return r;
}

}  // namespace hilbert
