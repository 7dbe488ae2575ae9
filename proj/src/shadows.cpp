#include "hilbert/shadows.hpp"

#include <cmath>

#include "hilbert/metric.hpp"
#include "hilbert/numerics.hpp"

namespace hilbert {

double min_ray_distance(const ConvexDomain& domain, const Vec& from,
                        const HomogeneousPoint& xi, const Vec& target,
                        bool from_is_boundary) {
  const Vec xia = domain.chart().to_affine(xi);
  const Vec d = xia - from;
  if (d.norm() < 1e-14)
    throw ArgumentError("min_ray_distance: ray endpoint equals the source");
  // Chord parameter range: stop just short of the boundary endpoint, and for
  // a boundary source start just inside as well.
  const double lo = from_is_boundary ? 1e-9 : 0.0;
  const double hi = 1.0 - 1e-9;
  const auto dist = [&](double t) {
    return hilbert_distance_affine(domain, target, from + t * d);
  };
  return golden_min(dist, lo, hi, 1e-10).second;
}

namespace {

bool plain_hit(const ConvexDomain& domain, const Vec& source,
               const HomogeneousPoint& xi, const Vec& center, double r,
               bool boundary_source) {
  return min_ray_distance(domain, source, xi, center, boundary_source) < r;
}

}  // namespace

bool in_shadow(const ConvexDomain& domain, const Shadow& shadow,
               const HomogeneousPoint& xi) {
  const AffineChart& chart = domain.chart();
  const Vec center = chart.to_affine(shadow.center);
  if (!domain.contains(center))
    throw ArgumentError("in_shadow: target center must be interior");
  if (!(shadow.radius > 0.0))
    throw ArgumentError("in_shadow: radius must be positive");

  Vec source;
  bool boundary_source = false;
  try {
    source = chart.to_affine(shadow.source);
    boundary_source = !domain.contains(source);
  } catch (const ChartError&) {
    throw ArgumentError("in_shadow: light source escapes the domain chart");
  }
  if (boundary_source && std::abs(domain.defect(source)) > 1e-6)
    throw ArgumentError("in_shadow: light source is neither interior nor on "
                        "the boundary");
  if (boundary_source && shadow.source.approx_equal(xi))
    throw ArgumentError("in_shadow: boundary source coincides with the "
                        "queried direction");

  if (shadow.variant == ShadowVariant::Plain)
    return plain_hit(domain, source, xi, center, shadow.radius,
                     boundary_source);

  if (boundary_source)
    throw ArgumentError(
        "in_shadow: enlarged/contracted variants need an interior source");
  const double gap =
      hilbert_distance_affine(domain, source, center);
  if (!(gap > 2.0 * shadow.radius))
    throw ArgumentError(
        "in_shadow: enlarged/contracted variants require d(source, center) > "
        "2r");

  const auto mesh =
      metric_ball_mesh(domain, source, shadow.radius, 32, 3);
  if (shadow.variant == ShadowVariant::Enlarged) {
    for (const Vec& probe : mesh)
      if (plain_hit(domain, probe, xi, center, shadow.radius, false))
        return true;
    return false;
  }
  for (const Vec& probe : mesh)
    if (!plain_hit(domain, probe, xi, center, shadow.radius, false))
      return false;
  return true;
}

BoundarySet BoundarySet::whole() {
  BoundarySet s;
  s.member = [](const HomogeneousPoint&) { return true; };
  return s;
}

BoundarySet BoundarySet::empty() { return BoundarySet{}; }

BoundarySet BoundarySet::angular_cap(const Vec& axis, double angle_radians) {
  if (axis.norm() < 1e-14)
    throw ArgumentError("BoundarySet::angular_cap: zero axis");
  BoundarySet s;
  const Vec unit_axis = axis / axis.norm();
  const double threshold = std::cos(angle_radians);
  const int expect_dim = static_cast<int>(axis.size());
  s.cap = BoundaryCap{unit_axis, threshold};
  s.member = [unit_axis, threshold, expect_dim](const HomogeneousPoint& p) {
    // Chart coordinates of the boundary point, read in chart 0.
    AffineChart chart(0, expect_dim + 1);
    Vec xa;
    try {
      xa = chart.to_affine(p);
    } catch (const ChartError&) {
      return false;
    }
    const double n = xa.norm();
    if (n < 1e-12) return false;
    return xa.dot(unit_axis) / n >= threshold;
  };
  return s;
}

bool in_cone(const ConvexDomain& domain, ConeVariant variant, const Vec& x,
             const BoundarySet& a, double r, const Vec& y, int per_ring,
             int rings) {
  if (!(r > 0.0)) throw ArgumentError("in_cone: need r > 0");
  if (!a.member) return false;
  const auto source_mesh = metric_ball_mesh(domain, x, r, per_ring, rings);
  const auto target_mesh = metric_ball_mesh(domain, y, r, per_ring, rings);
  const AffineChart& chart = domain.chart();
  for (const Vec& xs : source_mesh) {
    for (const Vec& yt : target_mesh) {
      if ((yt - xs).norm() < 1e-12) continue;
      const HomogeneousPoint land =
          chart.to_projective(ray_boundary(domain, xs, yt));
      const bool hit = a.contains(land);
      if (variant == ConeVariant::Expanded && hit) return true;
      if (variant == ConeVariant::Contracted && !hit) return false;
    }
  }
  return variant == ConeVariant::Contracted;
}

}  // namespace hilbert
