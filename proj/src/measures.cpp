#include "hilbert/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hilbert/busemann.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/numerics.hpp"

namespace hilbert {

namespace {

// Displacements d(x, gamma x) of the whole ball, sorted ascending.
std::vector<double> displacement_spectrum(const GroupPresentation& group,
                                          const Vec& x, double R,
                                          EnumerationOptions options) {
  options.keep_words = false;
  std::vector<double> out;
  for_each_in_ball(group, x, R, options,
                   [&](const BallVisit& v) { out.push_back(v.displacement); });
  std::sort(out.begin(), out.end());
  return out;
}

// log-slope of the top-half unit-shell sums of e^{-s d}; +inf when the top
// half has no populated shells to fit.
double shell_log_slope(const std::vector<double>& disps, double s, double R) {
  const int shells = std::max(2, static_cast<int>(std::floor(R)));
  std::vector<double> sums(static_cast<std::size_t>(shells), 0.0);
  for (double d : disps) {
    const int j = std::min(shells - 1, static_cast<int>(std::floor(d)));
    sums[static_cast<std::size_t>(j)] += std::exp(-s * d);
  }
  std::vector<double> ts, ys;
  for (int j = shells / 2; j < shells; ++j) {
    if (sums[static_cast<std::size_t>(j)] <= 0.0) continue;
    ts.push_back(j + 0.5);
    ys.push_back(std::log(sums[static_cast<std::size_t>(j)]));
  }
  if (ts.size() < 2) return std::numeric_limits<double>::infinity();
  return fit_line(ts, ys).slope;
}

}  // namespace

double AtomicMeasure::total_mass() const {
  std::vector<double> w;
  w.reserve(atoms.size());
  for (const Atom& a : atoms) w.push_back(a.weight);
  return pairwise_sum(w);
}

PoincareValue poincare_series(const GroupPresentation& group, double s,
                              const Vec& x, double R,
                              const EnumerationOptions& options) {
  if (s < 0.0)
    throw ArgumentError("poincare_series: exponent must be nonnegative");
  if (!(R > 0.0))
    throw ArgumentError("poincare_series: truncation radius must be positive");
  std::vector<double> terms, tail;
  EnumerationOptions opt = options;
  opt.keep_words = false;
  for_each_in_ball(group, x, R, opt, [&](const BallVisit& v) {
    const double w = std::exp(-s * v.displacement);
    terms.push_back(w);
    if (v.displacement > 0.5 * R) tail.push_back(w);
  });
  const double total = pairwise_sum(terms);
  const double tail_sum = pairwise_sum(tail);
  return {total, tail_sum < 1e-6 * total};
}

CriticalExponentEstimate estimate_critical_exponent(
    const GroupPresentation& group, const Vec& x, double R,
    ExponentMethod method, const EnumerationOptions& options) {
  if (!(R > 0.0))
    throw ArgumentError(
        "estimate_critical_exponent: radius must be positive");
  const std::vector<double> disps =
      displacement_spectrum(group, x, R, options);
  if (disps.size() < 200)
    throw ResourceError(
        "estimate_critical_exponent: ball of radius " + std::to_string(R) +
        " holds only " + std::to_string(disps.size()) +
        " elements (need 200); enlarge R");

  CriticalExponentEstimate est;
  est.window_lo = 0.5 * R;
  est.window_hi = R;
  est.method = method;
  if (method == ExponentMethod::Slope) {
    // N(t) on a uniform grid over the top half; log-linear fit.
    const int grid = 17;
    std::vector<double> ts, ys;
    for (int k = 0; k < grid; ++k) {
      const double t = est.window_lo + (est.window_hi - est.window_lo) * k /
                                           static_cast<double>(grid - 1);
      const std::size_t n = static_cast<std::size_t>(
          std::upper_bound(disps.begin(), disps.end(), t) - disps.begin());
      if (n == 0) continue;
      ts.push_back(t);
      ys.push_back(std::log(static_cast<double>(n)));
    }
    if (ts.size() < 3)
      throw ResourceError(
          "estimate_critical_exponent: degenerate counting grid");
    const SlopeFit fit = fit_line(ts, ys);
    est.delta_hat = std::max(0.0, fit.slope);
    est.stderr_value = fit.slope_stderr;
  } else {
    // Smallest s whose top-half shell sums decay; the counting slope is an
    // upper starting bracket.
    double lo = 0.0, hi = 4.0;
    if (shell_log_slope(disps, hi, R) > -1e-3)
      throw NumericalError(
          "estimate_critical_exponent: shells do not decay even at s = 4");
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (shell_log_slope(disps, mid, R) < -1e-3)
        hi = mid;
      else
        lo = mid;
    }
    est.delta_hat = 0.5 * (lo + hi);
    est.stderr_value = hi - lo;
  }
  return est;
}

AtomicMeasure patterson_sullivan(const GroupPresentation& group, const Vec& o,
                                 const Vec& x, double s, double R,
                                 double delta_hat,
                                 const EnumerationOptions& options) {
  if (!(s > delta_hat))
    throw ArgumentError(
        "patterson_sullivan: exponent s must exceed delta_hat strictly "
        "(series divergence regime)");
  if (!std::isfinite(R) || !(R > 0.0))
    throw ArgumentError("patterson_sullivan: radius must be finite positive");
  const ConvexDomain& dom = group.domain();
  const AffineChart& chart = dom.chart();

  struct RawAtom {
    Vec affine;
    double disp_x;
    double disp_o;
  };
  std::vector<RawAtom> raw;
  EnumerationOptions opt = options;
  opt.keep_words = false;
  const Vec o_lift = chart.lift(o);
  const bool same_base = (x - o).lpNorm<Eigen::Infinity>() == 0.0;
  for_each_in_ball(group, o, R, opt, [&](const BallVisit& v) {
    const Vec img = chart.to_affine_raw(v.matrix * o_lift);
    const double dx =
        same_base ? v.displacement : hilbert_distance_affine(dom, x, img);
    raw.push_back({img, dx, v.displacement});
  });

  // Merge coincident orbit points (finite stabilizers of o).
  std::sort(raw.begin(), raw.end(), [](const RawAtom& a, const RawAtom& b) {
    const int n = static_cast<int>(a.affine.size());
    for (int i = 0; i < n; ++i)
      if (a.affine(i) != b.affine(i)) return a.affine(i) < b.affine(i);
    return false;
  });

  AtomicMeasure mu;
  mu.basepoint = x;
  mu.orbit_basepoint = o;
  mu.s = s;
  mu.radius = R;

  std::vector<double> denom_terms;
  denom_terms.reserve(raw.size());
  for (const RawAtom& a : raw) denom_terms.push_back(std::exp(-s * a.disp_o));
  mu.normalization = pairwise_sum(denom_terms);

  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i + 1;
    double weight = std::exp(-s * raw[i].disp_x);
    while (j < raw.size() &&
           (raw[j].affine - raw[i].affine).lpNorm<Eigen::Infinity>() <
               kSpectralGapTol) {
      weight += std::exp(-s * raw[j].disp_x);
      ++j;
    }
    mu.atoms.push_back(Atom{HomogeneousPoint(chart.lift(raw[i].affine)),
                            weight / mu.normalization, raw[i].disp_x});
    i = j;
  }
  return mu;
}

double shadow_mass(const ConvexDomain& domain, const AtomicMeasure& mu,
                   const Shadow& shadow) {
  const AffineChart& chart = domain.chart();
  // Rays emanate from the light source; if the source escapes the chart
  // (never the case for the shipped domains) fall back to the ball center.
  Vec from;
  try {
    from = chart.to_affine(shadow.source);
  } catch (const ChartError&) {
    from = chart.to_affine(shadow.center);
  }
  std::vector<double> hits;
  for (const Atom& a : mu.atoms) {
    Vec p;
    try {
      p = chart.to_affine(a.point);
    } catch (const ChartError&) {
      continue;
    }
    HomogeneousPoint xi = a.point;
    if (domain.contains(p)) {
      // Interior atom: read membership through the ray from the source.
      if ((p - from).lpNorm<Eigen::Infinity>() < 1e-14) continue;
      xi = chart.to_projective(ray_boundary(domain, from, p));
    }
    try {
      if (in_shadow(domain, shadow, xi)) hits.push_back(a.weight);
    } catch (const ArgumentError&) {
      continue;  // ray degenerates against the source point
    }
  }
  return pairwise_sum(hits);
}

double set_mass(const AtomicMeasure& mu, const BoundarySet& set) {
  std::vector<double> hits;
  for (const Atom& a : mu.atoms) {
    if (set.contains(a.point)) hits.push_back(a.weight);
  }
  return pairwise_sum(hits);
}

double sullivan_density(const ConvexDomain& domain, const AtomicMeasure& mu_x,
                        const HomogeneousPoint& xi, const HomogeneousPoint& eta,
                        double delta) {
  const double gp = gromov_product(domain, mu_x.basepoint, xi, eta);
  return std::exp(2.0 * delta * gp);
}

CuspSeriesBound cusp_series_bound(const GroupPresentation& group,
                                  const std::vector<int>& parabolic_marker,
                                  const Vec& x, double delta, double r,
                                  double R) {
  if (!(r > 0.0) || !(R > 0.0))
    throw ArgumentError("cusp_series_bound: radii must be positive");
  if (parabolic_marker.empty()) return {2.0 * r, true};

  std::vector<Mat> gens;
  std::vector<std::string> labels;
  for (int idx : parabolic_marker) {
    if (idx < 0 || idx >= group.generator_count())
      throw ArgumentError("cusp_series_bound: marker index out of range");
    const ProjectiveTransform t(group.generator(idx));
    const SpectralData sd = classify(t, group.domain());
    if (sd.type != IsometryClass::Parabolic)
      throw ArgumentError("cusp_series_bound: marked generator " +
                          group.label(idx) + " is not parabolic");
    gens.push_back(group.generator(idx));
    labels.push_back(group.label(idx));
  }
  GroupPresentation::Flags flags;
  flags.expects_parabolics = true;
  const GroupPresentation sub(gens, labels, group.domain(), flags);

  std::vector<double> terms;
  std::vector<double> disps;
  EnumerationOptions opt;
  opt.keep_words = false;
  for_each_in_ball(sub, x, R, opt, [&](const BallVisit& v) {
    terms.push_back((v.displacement + 2.0 * r) *
                    std::exp(-delta * v.displacement));
    disps.push_back(v.displacement);
  });
  const double value = pairwise_sum(terms);

  // Unit-shell decay over the top half, same instrumentation as the series
  // bracket: slope of log shell sums.
  const int shells = std::max(2, static_cast<int>(std::floor(R)));
  std::vector<double> sums(static_cast<std::size_t>(shells), 0.0);
  for (std::size_t i = 0; i < disps.size(); ++i) {
    const int j = std::min(shells - 1, static_cast<int>(std::floor(disps[i])));
    sums[static_cast<std::size_t>(j)] += terms[i];
  }
  std::vector<double> ts, ys;
  for (int j = shells / 2; j < shells; ++j) {
    if (sums[static_cast<std::size_t>(j)] <= 0.0) continue;
    ts.push_back(j + 0.5);
    ys.push_back(std::log(sums[static_cast<std::size_t>(j)]));
  }
  bool decays = false;
  if (ts.size() >= 2) decays = fit_line(ts, ys).slope < -1e-3;
  return {value, decays};
}

}  // namespace hilbert
