#include "hilbert/metric.hpp"

#include <cmath>

#include "hilbert/numerics.hpp"

namespace hilbert {

double hilbert_distance_affine(const ConvexDomain& domain, const Vec& x,
                               const Vec& y) {
  Vec d = y - x;
  const double scale = x.norm() + y.norm() + 1.0;
  if (d.norm() <= 1e-16 * scale) return 0.0;
  const LineHits hits = domain.line_hits(x, d);
  const double back = -hits.t_minus;
  const double fwd = hits.t_plus - 1.0;
  if (!(back > 0.0) || !(fwd > 0.0))
    throw GeometryError("hilbert_distance: endpoint is not interior");
  return 0.5 * (std::log1p(1.0 / back) + std::log1p(1.0 / fwd));
}

double hilbert_distance(const ConvexDomain& domain, const HomogeneousPoint& x,
                        const HomogeneousPoint& y) {
  const AffineChart& chart = domain.chart();
  return hilbert_distance_affine(domain, chart.to_affine(x),
                                 chart.to_affine(y));
}

double finsler_norm(const ConvexDomain& domain, const Vec& x, const Vec& v) {
  if (v.norm() == 0.0) return 0.0;
  const LineHits hits = domain.line_hits(x, v);
  return 0.5 * (1.0 / hits.t_plus - 1.0 / hits.t_minus);
}

Vec geodesic_point_affine(const ConvexDomain& domain, const Vec& x,
                          const Vec& xi_affine, double t) {
  Vec d = xi_affine - x;
  if (d.norm() < 1e-14)
    throw GeometryError("geodesic_point: target coincides with basepoint");
  const LineHits hits = domain.line_hits(x, d);
  const double ta = hits.t_minus;
  const double e = std::exp(-2.0 * t);
  const double u = ta * (e - 1.0) / (e - ta);
  return x + u * d;
}

HomogeneousPoint geodesic_point(const ConvexDomain& domain,
                                const HomogeneousPoint& x,
                                const HomogeneousPoint& xi, double t) {
  const AffineChart& chart = domain.chart();
  const Vec xa = chart.to_affine(x);
  const Vec xia = chart.to_affine(xi);
  return chart.to_projective(geodesic_point_affine(domain, xa, xia, t));
}

namespace {

// Chord parameter u of x between the affine endpoints, with the complement
// 1 - u computed independently so neither end loses precision.
struct ChordParam {
  double u;
  double one_minus_u;
};

ChordParam chord_param(const Vec& bwd, const Vec& fwd, const Vec& x) {
  const Vec d = fwd - bwd;
  const double len2 = d.squaredNorm();
  if (len2 < 1e-28)
    throw GeometryError("chord_param: endpoints coincide");
  ChordParam cp;
  cp.u = (x - bwd).dot(d) / len2;
  cp.one_minus_u = (fwd - x).dot(d) / len2;
  const double off = (x - (bwd + cp.u * d)).norm();
  if (off > 1e-9 * (1.0 + std::sqrt(len2)))
    throw GeometryError("chord_param: point is not on the chord");
  if (!(cp.u > 0.0) || !(cp.one_minus_u > 0.0))
    throw GeometryError("chord_param: point is not between the endpoints");
  return cp;
}

}  // namespace

UnitTangent tangent_at(const ConvexDomain& domain,
                       const HomogeneousPoint& backward,
                       const HomogeneousPoint& forward, const Vec& x) {
  const AffineChart& chart = domain.chart();
  const Vec bwd = chart.to_affine(backward);
  const Vec fwd = chart.to_affine(forward);
  const ChordParam cp = chord_param(bwd, fwd, x);
  UnitTangent v{backward, forward, 0.0};
  // Time of the chord parameter u relative to the Euclidean midpoint:
  // s = (1/2) log(u / (1-u)).
  v.time = 0.5 * (std::log(cp.u) - std::log(cp.one_minus_u));
  return v;
}

UnitTangent tangent_through(const ConvexDomain& domain, const Vec& x,
                            const Vec& d) {
  const LineHits hits = domain.line_hits(x, d);
  const Vec fwd = x + hits.t_plus * d;
  const Vec bwd = x + hits.t_minus * d;
  const AffineChart& chart = domain.chart();
  return tangent_at(domain, chart.to_projective(bwd), chart.to_projective(fwd),
                    x);
}

Vec footpoint(const ConvexDomain& domain, const UnitTangent& v) {
  const AffineChart& chart = domain.chart();
  const Vec bwd = chart.to_affine(v.backward);
  const Vec fwd = chart.to_affine(v.forward);
  // u = sigmoid(2s); for deep times this saturates at machine precision,
  // which matches the chord's representable resolution.
  const double u = 1.0 / (1.0 + std::exp(-2.0 * v.time));
  return bwd + u * (fwd - bwd);
}

UnitTangent transform_tangent(const ConvexDomain& domain,
                              const ProjectiveTransform& g,
                              const UnitTangent& v) {
  const Vec foot = footpoint(domain, v);
  const Vec image = g.apply_affine(domain.chart(), foot);
  return tangent_at(domain, g.apply(v.backward), g.apply(v.forward), image);
}

std::vector<Vec> metric_ball_mesh(const ConvexDomain& domain,
                                  const Vec& center, double r, int per_ring,
                                  int rings) {
  if (!(r > 0.0) || per_ring < 1 || rings < 1)
    throw ArgumentError("metric_ball_mesh: bad mesh parameters");
  std::vector<Vec> mesh;
  mesh.reserve(static_cast<std::size_t>(per_ring * rings) + 1);
  mesh.push_back(center);
  const auto dirs = sphere_mesh(domain.dim(), per_ring);
  for (const Vec& dir : dirs) {
    const LineHits hits = domain.line_hits(center, dir);
    const Vec xi = center + hits.t_plus * dir;
    for (int k = 1; k <= rings; ++k) {
      const double rad = r * static_cast<double>(k) / static_cast<double>(rings);
      mesh.push_back(geodesic_point_affine(domain, center, xi, rad));
    }
  }
  return mesh;
}

}  // namespace hilbert
