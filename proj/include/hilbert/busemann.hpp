#pragma once

#include "hilbert/domain.hpp"
#include "hilbert/metric.hpp"

namespace hilbert {

// Busemann cocycle beta_xi(x, y) = lim_{z -> xi} d(x, z) - d(y, z) for a
// boundary point xi and interior points x, y.  Positive when x is farther
// from xi in horospherical depth.
//
// Ellipsoids use the closed form of the Cayley-Klein model (Cholesky map to
// the unit ball).  Other bodies go through the adaptive truncation below.
double busemann(const ConvexDomain& domain, const HomogeneousPoint& xi,
                const Vec& x, const Vec& y);
double busemann(const ConvexDomain& domain, const HomogeneousPoint& xi,
                const HomogeneousPoint& x, const HomogeneousPoint& y);

// One truncation step: d(x, z_T) - d(y, z_T) where z_T sits at parameter gap
// eta = (t_xi - t_a) / (1 + K), K = (-t_a / t_xi) e^{2T}, on the chord from x
// toward xi.  The shared boundary-gap factor of the two chord logs cancels
// symbolically, leaving backward roots, a boundary-gradient ratio, and gauge
// corrections log1p(zeta); everything evaluated is O(1)-conditioned, so
// truncation at e.g. T = 64 (eta ~ 1e-56) loses nothing to rounding.
double busemann_truncated(const ConvexDomain& domain,
                          const HomogeneousPoint& xi, const Vec& x,
                          const Vec& y, double T);

// Doubling T in {1, 2, 4, ..., t_max} until two consecutive values agree to
// `tol`; throws NumericalError with the last two iterates if they never do.
double busemann_adaptive(const ConvexDomain& domain,
                         const HomogeneousPoint& xi, const Vec& x,
                         const Vec& y, double tol = 1e-9,
                         double t_max = 64.0);

// Gromov product of two boundary points seen from interior x, computed from
// the Busemann cocycle at the Euclidean midpoint u of the (xi, eta) chord:
//   <xi, eta>_x = (1/2) (beta_xi(x, u) + beta_eta(x, u)),
// clamped at zero (exact arithmetic keeps it nonnegative).  Throws
// GeometryError when xi and eta coincide.
double gromov_product(const ConvexDomain& domain, const Vec& x,
                      const HomogeneousPoint& xi, const HomogeneousPoint& eta);

// Mixed product of an interior point y and boundary point xi from x:
//   <y, xi>_x = (1/2) (d(x, y) + beta_xi(x, y)).
double gromov_product_mixed(const ConvexDomain& domain, const Vec& x,
                            const Vec& y, const HomogeneousPoint& xi);

// Boundary visual kernel exp(-<xi, eta>_x).  Vanishing distance iff the
// arguments coincide; metric axioms are not asserted for general bodies.
double visual_kernel(const ConvexDomain& domain, const Vec& x,
                     const HomogeneousPoint& xi, const HomogeneousPoint& eta);

// Boundary cross ratio through Gromov products,
//   B(a, b, c, d) = 2 [ <a,d> + <b,c> - <a,c> - <b,d> ]  (any basepoint),
// normalized so that B(axis-, axis+, g.xi, xi) = 2 * translation_length(g)
// for hyperbolic g with attracting/repelling pair (axis+, axis-).
double cross_ratio(const ConvexDomain& domain, const HomogeneousPoint& a,
                   const HomogeneousPoint& b, const HomogeneousPoint& c,
                   const HomogeneousPoint& d);
double cross_ratio_at(const ConvexDomain& domain, const Vec& basepoint,
                      const HomogeneousPoint& a, const HomogeneousPoint& b,
                      const HomogeneousPoint& c, const HomogeneousPoint& d);

// Open horoball about xi through the anchor: contains y iff
// beta_xi(anchor, y) > 0.
struct Horoball {
  HomogeneousPoint base;
  Vec anchor;
};
bool in_horoball(const ConvexDomain& domain, const Horoball& hb, const Vec& y);

}  // namespace hilbert
