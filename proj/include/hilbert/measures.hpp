#pragma once

#include <string>
#include <vector>

#include "hilbert/group.hpp"
#include "hilbert/shadows.hpp"

namespace hilbert {

// One weighted Dirac mass at an orbit point.
struct Atom {
  HomogeneousPoint point;
  double weight;        // normalized weight
  double displacement;  // d(point, basepoint) as stored at construction
};

// Finite atomic approximation of a Patterson-Sullivan measure: atoms at
// orbit points of radius <= radius, weights e^{-s d(atom, basepoint)}
// divided by the series value at the orbit basepoint.  Coincident orbit
// points (finite stabilizers) are merged at 1e-9 with weights added.
struct AtomicMeasure {
  std::vector<Atom> atoms;
  Vec basepoint;        // x in the weight exponent
  Vec orbit_basepoint;  // o whose orbit carries the atoms
  double s = 0.0;
  double radius = 0.0;
  double normalization = 1.0;  // denominator: series value at o
  std::string normalization_mode = "basepoint-o";

  double total_mass() const;
};

struct PoincareValue {
  double value;
  // True when the last dyadic shell (R/2, R] contributes < 1e-6 of the
  // total: the desk-scale convergence signal.
  bool tail_decayed;
};

// Partial Poincare series sum_{d(x, gamma x) <= R} e^{-s d(x, gamma x)}.
PoincareValue poincare_series(const GroupPresentation& group, double s,
                              const Vec& x, double R,
                              const EnumerationOptions& options = {});

enum class ExponentMethod { Slope, SeriesBracket };

struct CriticalExponentEstimate {
  double delta_hat = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double stderr_value = 0.0;
  ExponentMethod method = ExponentMethod::Slope;
};

// Growth exponent of N(t) = #{gamma : d(x, gamma x) <= t}.  Slope method:
// least-squares fit of log N over [R/2, R].  SeriesBracket: smallest s at
// which the top-half unit shells of e^{-s d} decay, located by bisection
// (stderr then reports the bracket width).
CriticalExponentEstimate estimate_critical_exponent(
    const GroupPresentation& group, const Vec& x, double R,
    ExponentMethod method = ExponentMethod::Slope,
    const EnumerationOptions& options = {});

// Atomic mu_{x,s}: atoms at orbit points gamma o with d(gamma o, o) <= R,
// weight e^{-s d(gamma o, x)}, normalized by the series value at o itself
// so that the measure at x = o has mass exactly 1.  Requires s > delta_hat
// (the caller's exponent estimate), else ArgumentError.
AtomicMeasure patterson_sullivan(const GroupPresentation& group, const Vec& o,
                                 const Vec& x, double s, double R,
                                 double delta_hat,
                                 const EnumerationOptions& options = {});

// Total weight of atoms whose ray from the shadow's light source lands in
// the shadow (atoms are interior, so membership is read through the ray).
double shadow_mass(const ConvexDomain& domain, const AtomicMeasure& mu,
                   const Shadow& shadow);

// Total weight of atoms the set predicate accepts, evaluated on the atom
// positions themselves: angular caps read as solid cones, so interior orbit
// points count the same way the orbit sums in the equidistribution
// experiments count them.
double set_mass(const AtomicMeasure& mu, const BoundarySet& set);

// Sullivan density e^{2 delta <xi,eta>_x} against mu_x x mu_x; symmetric in
// (xi, eta), ArgumentError when they coincide.
double sullivan_density(const ConvexDomain& domain, const AtomicMeasure& mu_x,
                        const HomogeneousPoint& xi, const HomogeneousPoint& eta,
                        double delta);

struct CuspSeriesBound {
  double value;
  // True when unit-shell partial sums decay over the top half of the radius
  // range (log-slope < -1e-3): the finiteness witness.
  bool shells_decay;
};

// Partial sum of (d(x,px) + 2r) e^{-delta d(x,px)} over the subgroup
// generated by the marked generators, enumerated to radius R.  Every marked
// generator must classify as Parabolic.  An empty marker denotes the
// trivial subgroup (identity term only).
CuspSeriesBound cusp_series_bound(const GroupPresentation& group,
                                  const std::vector<int>& parabolic_marker,
                                  const Vec& x, double delta, double r,
                                  double R);

}  // namespace hilbert
