#include <doctest.h>

#include <cmath>
#include <vector>

#include "hilbert/domain.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/numerics.hpp"
#include "hilbert/oracles.hpp"
#include "hilbert/projective.hpp"

using namespace hilbert;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Mat boost_x(double s) {
  Mat m = Mat::Identity(3, 3);
  m(0, 0) = std::cosh(s);
  m(0, 1) = std::sinh(s);
  m(1, 0) = std::sinh(s);
  m(1, 1) = std::cosh(s);
  return m;
}

Mat rot(double th) {
  Mat m = Mat::Identity(3, 3);
  m(1, 1) = std::cos(th);
  m(1, 2) = -std::sin(th);
  m(2, 1) = std::sin(th);
  m(2, 2) = std::cos(th);
  return m;
}

Vec apply_affine(const Mat& g, const Vec& x) {
  const AffineChart chart(0, static_cast<int>(x.size()) + 1);
  return ProjectiveTransform(g).apply_affine(chart, x);
}

// Deterministic interior mesh: directions from the low-discrepancy sphere
// mesh, three radial fractions of the chord to the boundary.
std::vector<Vec> interior_mesh(const ConvexDomain& dom, int n_dirs) {
  const Vec c = dom.center();
  std::vector<Vec> pts = {c};
  int k = 0;
  for (const Vec& d : sphere_mesh(dom.dim(), n_dirs)) {
    const double frac[3] = {0.2, 0.55, 0.85};
    const Vec b = ray_boundary(dom, c, c + d);
    pts.push_back(c + frac[k % 3] * (b - c));
    ++k;
  }
  return pts;
}

}  // namespace

TEST_CASE("klein disk distances") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);

  // d(0, r e) = artanh(r) pins the curvature normalization.
  for (double r : {0.1, 0.5, 0.9, 0.99}) {
    const double want = std::atanh(r);
    CHECK(hilbert_distance_affine(ball, vec2(0, 0), vec2(r, 0)) ==
          doctest::Approx(want).epsilon(1e-13));
  }

  // Full agreement with the hyperboloid-model closed form.
  const auto pts = interior_mesh(ball, 14);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double lib = hilbert_distance_affine(ball, pts[i], pts[j]);
      const double ref = klein_distance(pts[i], pts[j]);
      CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("projective and affine evaluations agree") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const AffineChart chart(0, 3);
  const Vec x = vec2(0.3, -0.2);
  const Vec y = vec2(-0.5, 0.1);
  const double da = hilbert_distance_affine(ball, x, y);
  const double dp =
      hilbert_distance(ball, chart.to_projective(x), chart.to_projective(y));
  CHECK(da == doctest::Approx(dp).epsilon(1e-14));
}

TEST_CASE("metric axioms on all domain kinds") {
  Mat q(2, 2);
  q << 1.3, 0.2, 0.2, 0.8;
  std::vector<ConvexDomain> doms;
  doms.push_back(ConvexDomain::unit_ball(2));
  doms.push_back(ConvexDomain::ellipsoid(q));
  doms.push_back(ConvexDomain::pnorm_ball(4.0, 1.0, 2));
  doms.push_back(ConvexDomain::pnorm_ball(2.5, 0.8, 3));

  for (const ConvexDomain& dom : doms) {
    CAPTURE(dom.describe());
    const auto pts = interior_mesh(dom, dom.dim() == 2 ? 10 : 12);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(hilbert_distance_affine(dom, pts[i], pts[i]) == 0.0);
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double dij = hilbert_distance_affine(dom, pts[i], pts[j]);
        const double dji = hilbert_distance_affine(dom, pts[j], pts[i]);
        CHECK(dij > 0.0);
        CHECK(dij == doctest::Approx(dji).epsilon(1e-12));
        for (std::size_t k = 0; k < pts.size(); ++k) {
          const double dik = hilbert_distance_affine(dom, pts[i], pts[k]);
          const double dkj = hilbert_distance_affine(dom, pts[k], pts[j]);
          CHECK(dij <= dik + dkj + 1e-11);
        }
      }
    }
  }
}

TEST_CASE("isometry invariance on the disk") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const Mat g = boost_x(1.4) * rot(0.7) * boost_x(-0.6);
  const auto pts = interior_mesh(ball, 10);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double before = hilbert_distance_affine(ball, pts[i], pts[j]);
      const double after = hilbert_distance_affine(ball, apply_affine(g, pts[i]),
                                                   apply_affine(g, pts[j]));
      CHECK(after == doctest::Approx(before).epsilon(1e-11));
    }
}

TEST_CASE("affine maps carry the metric between domains") {
  // ellipsoid(C^T C) is the image of the unit ball under C^{-1}, and the
  // Hilbert metric is a projective invariant, so the pulled-back distances
  // match exactly.
  Mat c(2, 2);
  c << 1.2, 0.3, 0.0, 0.9;
  const Mat q = c.transpose() * c;
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const ConvexDomain ell = ConvexDomain::ellipsoid(q);
  const Mat cinv = c.inverse();
  const auto pts = interior_mesh(ball, 10);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double db = hilbert_distance_affine(ball, pts[i], pts[j]);
      const double de =
          hilbert_distance_affine(ell, cinv * pts[i], cinv * pts[j]);
      CHECK(de == doctest::Approx(db).epsilon(1e-11));
    }
}

TEST_CASE("pnorm ball linear symmetries") {
  const ConvexDomain dom = ConvexDomain::pnorm_ball(4.0, 1.0, 2);
  Mat swap(2, 2), refl(2, 2);
  swap << 0, 1, 1, 0;
  refl << -1, 0, 0, 1;
  const auto pts = interior_mesh(dom, 9);
  for (const Mat& p : {swap, refl})
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double before = hilbert_distance_affine(dom, pts[i], pts[j]);
        const double after =
            hilbert_distance_affine(dom, p * pts[i], p * pts[j]);
        CHECK(after == doctest::Approx(before).epsilon(1e-12));
      }
}

TEST_CASE("finsler norm") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const Vec x = vec2(0.4, -0.1);
  const Vec u = vec2(0.3, 0.8);
  const Vec v = vec2(-0.6, 0.2);

  // Positive homogeneity, and the central gauge is Euclidean on the disk.
  CHECK(finsler_norm(ball, x, 3.0 * u) ==
        doctest::Approx(3.0 * finsler_norm(ball, x, u)).epsilon(1e-13));
  CHECK(finsler_norm(ball, vec2(0, 0), vec2(1, 0)) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(finsler_norm(ball, x, Vec::Zero(2)) == 0.0);

  // Convexity of the tangent gauge.
  CHECK(finsler_norm(ball, x, u + v) <=
        finsler_norm(ball, x, u) + finsler_norm(ball, x, v) + 1e-12);

  // Difference quotient of the distance recovers the norm.
  const double h = 1e-6;
  const double dq = hilbert_distance_affine(ball, x, x + h * u) / h;
  CHECK(dq == doctest::Approx(finsler_norm(ball, x, u)).epsilon(1e-4));
}

TEST_CASE("geodesic points sit at the requested arclength") {
  Mat q(2, 2);
  q << 1.3, 0.2, 0.2, 0.8;
  for (const ConvexDomain& dom :
       {ConvexDomain::ellipsoid(q), ConvexDomain::pnorm_ball(4.0, 1.0, 2)}) {
    CAPTURE(dom.describe());
    const Vec x = 0.3 * ray_boundary(dom, dom.center(), dom.center() + vec2(1, 0.2));
    const Vec xi = ray_boundary(dom, x, x + vec2(-0.3, 1.0));
    const Vec p0 = geodesic_point_affine(dom, x, xi, 0.0);
    CHECK((p0 - x).norm() == doctest::Approx(0.0).epsilon(1e-12));
    for (double t : {0.4, 1.0, 2.5, -0.7, -3.0}) {
      const Vec pt = geodesic_point_affine(dom, x, xi, t);
      CHECK(dom.contains(pt));
      CHECK(hilbert_distance_affine(dom, x, pt) ==
            doctest::Approx(std::abs(t)).epsilon(1e-10));
    }
    // Additivity along the ray: the chord is the geodesic.
    const Vec pa = geodesic_point_affine(dom, x, xi, 0.4);
    const Vec pb = geodesic_point_affine(dom, x, xi, 1.7);
    CHECK(hilbert_distance_affine(dom, pa, pb) ==
          doctest::Approx(1.3).epsilon(1e-10));
  }
}

TEST_CASE("unit tangents and the geodesic flow") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const Vec x = vec2(0.25, -0.35);
  const Vec d = vec2(0.7, 0.4);
  const UnitTangent v = tangent_through(ball, x, d);

  CHECK((footpoint(ball, v) - x).norm() == doctest::Approx(0.0).epsilon(1e-9));

  // Flowing moves the footpoint by exactly t.
  for (double t : {0.5, 2.0, -1.2}) {
    const Vec y = footpoint(ball, flow(v, t));
    CHECK(hilbert_distance_affine(ball, x, y) ==
          doctest::Approx(std::abs(t)).epsilon(1e-9));
  }

  // Flip fixes the footpoint and reverses the flow.
  const UnitTangent w = flip(v);
  CHECK((footpoint(ball, w) - x).norm() == doctest::Approx(0.0).epsilon(1e-9));
  const Vec fwd = footpoint(ball, flow(v, 0.8));
  const Vec bwd = footpoint(ball, flow(w, -0.8));
  CHECK((fwd - bwd).norm() == doctest::Approx(0.0).epsilon(1e-9));

  // Reconstructing from the endpoints lands on the same geodesic.
  const UnitTangent u = tangent_at(ball, v.backward, v.forward, x);
  CHECK((footpoint(ball, u) - x).norm() == doctest::Approx(0.0).epsilon(1e-9));

  // Equivariance under an isometry.
  const Mat g = boost_x(0.9) * rot(1.3);
  const UnitTangent gv = transform_tangent(ball, ProjectiveTransform(g), v);
  const Vec want = apply_affine(g, x);
  CHECK((footpoint(ball, gv) - want).norm() ==
        doctest::Approx(0.0).epsilon(1e-9));

  // A point off the chord is rejected.
  CHECK_THROWS_AS(tangent_at(ball, v.backward, v.forward, vec2(0.8, 0.8)),
                  GeometryError);
}

TEST_CASE("metric ball mesh stays inside the ball") {
  Mat q(2, 2);
  q << 1.3, 0.2, 0.2, 0.8;
  const ConvexDomain dom = ConvexDomain::ellipsoid(q);
  const Vec c = 0.4 * ray_boundary(dom, dom.center(), vec2(0.5, 0.5));
  const double r = 1.5;
  const auto mesh = metric_ball_mesh(dom, c, r, 16, 4);
  CHECK(mesh.size() == 16 * 4 + 1);
  bool has_center = false;
  double dmax = 0.0;
  for (const Vec& p : mesh) {
    const double d = hilbert_distance_affine(dom, c, p);
    dmax = std::max(dmax, d);
    if (d == 0.0) has_center = true;
    CHECK(d <= r + 1e-9);
  }
  CHECK(has_center);
  // The outer ring actually reaches the sphere.
  CHECK(dmax == doctest::Approx(r).epsilon(1e-9));
}

TEST_CASE("orbit hull domain") {
  // Convex hull of a regular 12-gon: a polygonal approximation of the disk.
  const int n = 12;
  Mat cloud(n, 2);
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * M_PI * i / n;
    cloud(i, 0) = std::cos(th);
    cloud(i, 1) = std::sin(th);
  }
  const ConvexDomain hull = ConvexDomain::orbit_hull(cloud);
  CHECK(hull.center().norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hull.contains(vec2(0.5, 0.0)));
  CHECK(!hull.contains(vec2(1.01, 0.0)));
  CHECK(hull.defect(vec2(0.2, 0.1)) < 0.0);

  const Vec x = vec2(0.3, 0.1);
  const Vec y = vec2(-0.4, -0.2);
  const double dxy = hilbert_distance_affine(hull, x, y);
  CHECK(dxy > 0.0);
  CHECK(dxy == doctest::Approx(hilbert_distance_affine(hull, y, x)).epsilon(1e-10));
  CHECK(hilbert_distance_affine(hull, x, x) == 0.0);

  // The hull sits inside the disk, so its metric dominates the disk metric.
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  CHECK(dxy >= hilbert_distance_affine(ball, x, y) - 1e-10);

  const LineHits hits = hull.line_hits(x, vec2(1.0, 0.3));
  CHECK(hits.t_minus < 0.0);
  CHECK(hits.t_plus > 0.0);
}

TEST_CASE("boundary normals point outward") {
  Mat q(2, 2);
  q << 1.3, 0.2, 0.2, 0.8;
  for (const ConvexDomain& dom :
       {ConvexDomain::ellipsoid(q), ConvexDomain::pnorm_ball(4.0, 1.0, 2)}) {
    for (const Vec& d : sphere_mesh(2, 8)) {
      const Vec b = ray_boundary(dom, dom.center(), dom.center() + d);
      const Vec nrm = dom.boundary_normal(b);
      CHECK(nrm.dot(b - dom.center()) > 0.0);
    }
  }
}
