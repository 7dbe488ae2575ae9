#pragma once

#include <functional>
#include <optional>

#include "hilbert/busemann.hpp"
#include "hilbert/domain.hpp"

namespace hilbert {

enum class ShadowVariant { Plain, Enlarged, Contracted };

// Shadow cast by the ball B(center, r) from a light source that may sit in
// the interior or on the boundary.  The enlarged/contracted variants move
// the source over a deterministic mesh of B(source, r) and take the
// existential/universal answer; they require an interior source with
// d(source, center) > 2r.
struct Shadow {
  HomogeneousPoint source;
  HomogeneousPoint center;
  double radius;
  ShadowVariant variant = ShadowVariant::Plain;
};

// Minimum Hilbert distance from the ray ]from, xi) to the target, by
// golden-section search over the chord parameter (the distance is unimodal
// along a geodesic because metric balls are strictly convex).
double min_ray_distance(const ConvexDomain& domain, const Vec& from,
                        const HomogeneousPoint& xi, const Vec& target,
                        bool from_is_boundary = false);

bool in_shadow(const ConvexDomain& domain, const Shadow& shadow,
               const HomogeneousPoint& xi);

// Boundary subset given by a membership callback; an empty callback is the
// empty set.  The optional cap records that the predicate is the angular cap
// { xi : unit(xi_affine) . axis >= cos_angle } in chart coordinates, which
// callers can use to sample or integrate the set directly.
struct BoundaryCap {
  Vec axis;
  double cos_angle;
};

struct BoundarySet {
  std::function<bool(const HomogeneousPoint&)> member;
  std::optional<BoundaryCap> cap;

  static BoundarySet whole();
  static BoundarySet empty();
  static BoundarySet angular_cap(const Vec& axis, double angle_radians);
  bool contains(const HomogeneousPoint& xi) const {
    return member && member(xi);
  }
};

enum class ConeVariant { Expanded, Contracted };

// Cones over a boundary set A seen from x, thickened by r, with membership
// probed at y:
//   expanded    some ray from B(x,r) through B(y,r) lands in A
//   contracted  every ray from mesh(B(x,r)) through mesh(B(y,r)) lands in A
// Both quantifiers run over deterministic ball meshes (per_ring directions,
// `rings` shells; defaults 32 and 3).
bool in_cone(const ConvexDomain& domain, ConeVariant variant, const Vec& x,
             const BoundarySet& a, double r, const Vec& y, int per_ring = 32,
             int rings = 3);

}  // namespace hilbert
