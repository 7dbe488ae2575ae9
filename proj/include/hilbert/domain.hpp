#pragma once

#include <string>
#include <utility>
#include <variant>

#include "hilbert/projective.hpp"

namespace hilbert {

// Bodies an open bounded convex domain can take, all centered in a fixed
// affine chart.  Ellipsoid and PNormBall have exact boundary oracles; an
// OrbitHull is the convex hull of a finite cloud, clipped by linear programs,
// and every quantity derived from it is flagged approximate.
struct Ellipsoid {
  Mat Q;  // x^T Q x < 1, Q symmetric positive definite
};

struct PNormBall {
  double p;       // strictly convex only for 1 < p < infinity
  double radius;  // sum |x_i / radius|^p < 1
};

struct OrbitHull {
  Mat points;  // one cloud point per row
  Vec centroid;
};

struct LineHits {
  double t_minus;  // backward chord parameter, < 0 for interior basepoints
  double t_plus;   // forward chord parameter, > 0
};

class ConvexDomain {
 public:
  static ConvexDomain ellipsoid(const Mat& Q);
  static ConvexDomain unit_ball(int dim);
  static ConvexDomain pnorm_ball(double p, double radius, int dim);
  static ConvexDomain orbit_hull(const Mat& cloud);

  int dim() const { return dim_; }
  const AffineChart& chart() const { return chart_; }
  bool approximate() const {
    return std::holds_alternative<OrbitHull>(body_);
  }
  const std::variant<Ellipsoid, PNormBall, OrbitHull>& body() const {
    return body_;
  }

  // Gauge defect: negative inside, zero on the boundary, increasing outward.
  // For the exact bodies this is the defining inequality's residual; for a
  // hull it is the Minkowski functional about the centroid minus one.
  double defect(const Vec& x) const;

  // Strict interior test.  The margin is measured on the gauge defect, so
  // points within margin of the boundary (in gauge) are excluded.
  bool contains(const Vec& x, double margin = kPointTol) const;
  bool contains_point(const HomogeneousPoint& p,
                      double margin = kPointTol) const;

  // Chord through interior x in direction d: parameters of both boundary
  // hits, t_minus < 0 < t_plus.  Throws GeometryError when x is not interior
  // or d is numerically zero.
  LineHits line_hits(const Vec& x, const Vec& d) const;

  // Outward supporting normal at a boundary point (not normalized).  For a
  // hull this is the least-norm functional supporting the exit face.
  Vec boundary_normal(const Vec& b) const;

  // A distinguished interior point: the origin for the exact bodies, the
  // centroid for a hull.
  Vec center() const;

  std::string describe() const;

 private:
  ConvexDomain(std::variant<Ellipsoid, PNormBall, OrbitHull> body, int dim);
  std::variant<Ellipsoid, PNormBall, OrbitHull> body_;
  int dim_;
  AffineChart chart_;
};

// Boundary hits of the chord through x along d as projective points, the
// forward hit (positive multiples of d) first.
std::pair<HomogeneousPoint, HomogeneousPoint> boundary_hits(
    const ConvexDomain& domain, const HomogeneousPoint& x, const Vec& d);

// Affine boundary point where the ray from `from` through `through` exits.
Vec ray_boundary(const ConvexDomain& domain, const Vec& from,
                 const Vec& through);

}  // namespace hilbert
