#pragma once

#include <vector>

#include "hilbert/domain.hpp"

namespace hilbert {

// Hilbert distance between interior points, half the log of the chord cross
// ratio.  Evaluated in chord parameters with y at parameter 1 and boundary
// hits t- < 0, t+ > 1:
//   d = 1/2 [ log1p(1/(-t-)) + log1p(1/(t+ - 1)) ]
// so no catastrophic cancellation occurs for nearly touching or nearly
// boundary configurations.
double hilbert_distance_affine(const ConvexDomain& domain, const Vec& x,
                               const Vec& y);
double hilbert_distance(const ConvexDomain& domain, const HomogeneousPoint& x,
                        const HomogeneousPoint& y);

// Finsler norm of tangent vector v at interior x: with chord parameters
// t-(x, v) and t+(x, v), F = 1/2 (1/t+ + 1/(-t-)).  Positively homogeneous
// of degree one in v.
double finsler_norm(const ConvexDomain& domain, const Vec& x, const Vec& v);

// Point at arclength t (any sign) from x along the geodesic toward boundary
// point xi, on the affine chord: u(t) = t_a (E - 1) / (E - t_a) with
// E = exp(-2t) and t_a the backward hit parameter.  Stays strictly inside
// the open chord for every finite t.
Vec geodesic_point_affine(const ConvexDomain& domain, const Vec& x,
                          const Vec& xi_affine, double t);
HomogeneousPoint geodesic_point(const ConvexDomain& domain,
                                const HomogeneousPoint& x,
                                const HomogeneousPoint& xi, double t);

// Oriented geodesic with a clock: time zero sits at the Euclidean midpoint
// of the chord, which is exactly where the two boundary-distance factors of
// the metric agree, so flipping the orientation fixes the origin.
struct UnitTangent {
  HomogeneousPoint backward;  // xi^-
  HomogeneousPoint forward;   // xi^+
  double time;
};

// Tangent with given endpoints whose footpoint is the affine point x; throws
// GeometryError when x is not on the open chord (within 1e-9 of it).
UnitTangent tangent_at(const ConvexDomain& domain,
                       const HomogeneousPoint& backward,
                       const HomogeneousPoint& forward, const Vec& x);

// Tangent through interior point x with direction d, clocked at x.
UnitTangent tangent_through(const ConvexDomain& domain, const Vec& x,
                            const Vec& d);

Vec footpoint(const ConvexDomain& domain, const UnitTangent& v);

inline UnitTangent flow(UnitTangent v, double t) {
  v.time += t;
  return v;
}

inline UnitTangent flip(UnitTangent v) {
  std::swap(v.backward, v.forward);
  v.time = -v.time;
  return v;
}

// Image of a tangent under an automorphism: endpoints map projectively and
// the clock is re-read so the footpoint maps to the footpoint.
UnitTangent transform_tangent(const ConvexDomain& domain,
                              const ProjectiveTransform& g,
                              const UnitTangent& v);

// Deterministic mesh of the closed metric ball B(center, r): `rings` shells
// of geodesic spheres with `per_ring` directions each, plus the center.
std::vector<Vec> metric_ball_mesh(const ConvexDomain& domain,
                                  const Vec& center, double r, int per_ring,
                                  int rings);

}  // namespace hilbert
