#include <doctest.h>

#include <cmath>
#include <vector>

#include "hilbert/busemann.hpp"
#include "hilbert/classify.hpp"
#include "hilbert/domain.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/numerics.hpp"
#include "hilbert/oracles.hpp"
#include "hilbert/projective.hpp"
#include "hilbert/shadows.hpp"

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

const AffineChart kChart(0, 3);

HomogeneousPoint circle_point(double th) {
  return kChart.to_projective(vec2(std::cos(th), std::sin(th)));
}

Vec apply_affine(const Mat& g, const Vec& x) {
  return ProjectiveTransform(g).apply_affine(kChart, x);
}

}  // namespace

TEST_CASE("busemann cocycle matches the hyperboloid closed form") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const std::vector<double> angles = {0.0, 0.9, 2.3, 4.0, 5.7};
  const std::vector<Vec> pts = {vec2(0, 0), vec2(0.4, 0.1), vec2(-0.3, 0.6),
                                vec2(0.1, -0.75)};
  for (double th : angles) {
    const HomogeneousPoint xi = circle_point(th);
    const Vec xi_aff = kChart.to_affine(xi);
    for (const Vec& x : pts)
      for (const Vec& y : pts) {
        const double lib = busemann(ball, xi, x, y);
        const double ref = klein_busemann(xi_aff, x, y);
        CHECK(lib == doctest::Approx(ref).epsilon(1e-11));
        // Against the defining limit, truncated at depth 10 along the ray.
        const double direct = busemann_direct(ball, xi, x, y, 10.0);
        CHECK(lib == doctest::Approx(direct).epsilon(2e-7));
      }
  }
}

TEST_CASE("busemann is an antisymmetric cocycle on every body") {
  Mat q(2, 2);
  q << 1.3, 0.2, 0.2, 0.8;
  for (const ConvexDomain& dom :
       {ConvexDomain::ellipsoid(q), ConvexDomain::pnorm_ball(4.0, 1.0, 2)}) {
    CAPTURE(dom.describe());
    const Vec x = vec2(0.3, 0.05);
    const Vec y = vec2(-0.25, 0.3);
    const Vec z = vec2(0.05, -0.4);
    for (double th : {0.3, 1.7, 3.9}) {
      const Vec dir = vec2(std::cos(th), std::sin(th));
      const HomogeneousPoint xi =
          kChart.to_projective(ray_boundary(dom, dom.center(), dom.center() + dir));
      const double bxy = busemann(dom, xi, x, y);
      const double byx = busemann(dom, xi, y, x);
      const double byz = busemann(dom, xi, y, z);
      const double bxz = busemann(dom, xi, x, z);
      CHECK(bxy == doctest::Approx(-byx).epsilon(1e-8));
      CHECK(bxy + byz == doctest::Approx(bxz).epsilon(1e-8));
      // The cocycle is 1-Lipschitz in each argument.
      CHECK(std::abs(bxy) <= hilbert_distance_affine(dom, x, y) + 1e-9);
    }
  }
}

TEST_CASE("truncated and adaptive busemann converge to the closed form") {
  Mat q(2, 2);
  q << 1.3, 0.2, 0.2, 0.8;
  const ConvexDomain ell = ConvexDomain::ellipsoid(q);
  const Vec x = vec2(0.25, -0.1);
  const Vec y = vec2(-0.2, 0.35);
  const HomogeneousPoint xi =
      kChart.to_projective(ray_boundary(ell, vec2(0, 0), vec2(0.6, 0.4)));

  const double closed = busemann(ell, xi, x, y);
  // Truncation error decays like e^{-2T}.
  const double e8 = std::abs(busemann_truncated(ell, xi, x, y, 8.0) - closed);
  const double e16 = std::abs(busemann_truncated(ell, xi, x, y, 16.0) - closed);
  CHECK(e8 < 1e-6);
  CHECK(e16 < 1e-11);
  CHECK(busemann_adaptive(ell, xi, x, y, 1e-10) ==
        doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("gromov products against the hyperboloid model") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const Vec o = vec2(0, 0);
  for (double a : {0.0, 1.1, 2.6})
    for (double b : {0.5, 3.4, 5.9}) {
      const HomogeneousPoint xi = circle_point(a);
      const HomogeneousPoint eta = circle_point(b);
      const double lib = gromov_product(ball, o, xi, eta);
      const double ref = klein_gromov(kChart.to_affine(xi), kChart.to_affine(eta));
      CHECK(lib == doctest::Approx(ref).epsilon(1e-10));
      CHECK(lib == doctest::Approx(gromov_product(ball, o, eta, xi)).epsilon(1e-10));
      CHECK(lib >= 0.0);
      CHECK(visual_kernel(ball, o, xi, eta) ==
            doctest::Approx(std::exp(-lib)).epsilon(1e-12));
    }
  CHECK_THROWS_AS(gromov_product(ball, o, circle_point(1.0), circle_point(1.0)),
                  ArgumentError);
}

TEST_CASE("mixed gromov product interpolates distance and cocycle") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const Vec x = vec2(0.1, 0.2);
  const HomogeneousPoint xi = circle_point(0.7);
  // As y marches toward xi along a geodesic ray, <y, xi>_x stabilizes (the
  // two growing terms cancel), while <y, eta>_x for eta on the opposite side
  // stays pinned near zero relative to d(x, y).
  const Vec xi_aff = kChart.to_affine(xi);
  double prev = -1.0;
  for (double t : {1.0, 3.0, 6.0}) {
    const Vec y = geodesic_point_affine(ball, x, xi_aff, t);
    const double m = gromov_product_mixed(ball, x, y, xi);
    CHECK(m >= prev - 1e-6);
    prev = m;
  }
  const Vec far = geodesic_point_affine(ball, x, xi_aff, 6.0);
  const HomogeneousPoint eta = circle_point(0.7 + M_PI);
  CHECK(gromov_product_mixed(ball, x, far, eta) <
        0.2 * hilbert_distance_affine(ball, x, far));
}

TEST_CASE("cross ratio identities") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const HomogeneousPoint a = circle_point(0.0);
  const HomogeneousPoint b = circle_point(1.3);
  const HomogeneousPoint c = circle_point(2.9);
  const HomogeneousPoint d = circle_point(4.4);
  const HomogeneousPoint e = circle_point(5.6);

  const double base = cross_ratio(ball, a, b, c, d);

  // Basepoint independence: the defining combination of Gromov products is a
  // coboundary in the basepoint.
  CHECK(cross_ratio_at(ball, vec2(0.3, -0.4), a, b, c, d) ==
        doctest::Approx(base).epsilon(1e-9));
  CHECK(cross_ratio_at(ball, vec2(-0.6, 0.1), a, b, c, d) ==
        doctest::Approx(base).epsilon(1e-9));

  // Antisymmetry in each pair and the chain rule in the last slot.
  CHECK(cross_ratio(ball, a, b, d, c) == doctest::Approx(-base).epsilon(1e-9));
  CHECK(cross_ratio(ball, b, a, c, d) == doctest::Approx(-base).epsilon(1e-9));
  CHECK_THROWS_AS(cross_ratio(ball, a, b, c, c), ArgumentError);
  CHECK(cross_ratio(ball, a, b, c, d) + cross_ratio(ball, a, b, d, e) ==
        doctest::Approx(cross_ratio(ball, a, b, c, e)).epsilon(1e-9));

  // Projective invariance under an isometry of the disk.
  const Mat g = boost_x(1.1) * rot(0.8);
  const ProjectiveTransform t(g);
  CHECK(cross_ratio(ball, t.apply(a), t.apply(b), t.apply(c), t.apply(d)) ==
        doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("cross ratio along an axis measures translation length") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  // Conjugate the x-axis boost so the axis is in generic position.
  const Mat g = rot(0.9) * boost_x(2.2) * rot(-0.9);
  const ProjectiveTransform t(g);
  const SpectralData sd = classify(t, ball);
  REQUIRE(sd.type == IsometryClass::Hyperbolic);

  for (double th : {0.3, 2.0, 3.8}) {
    const HomogeneousPoint xi = circle_point(th);
    const double b = cross_ratio(ball, sd.repelling.value(), sd.attracting.value(),
                                 t.apply(xi), xi);
    CHECK(b == doctest::Approx(2.0 * 2.2).epsilon(1e-8));
  }

  // The square doubles it.
  const ProjectiveTransform t2(g * g);
  const HomogeneousPoint xi = circle_point(2.0);
  CHECK(cross_ratio(ball, sd.repelling.value(), sd.attracting.value(),
                    t2.apply(xi), xi) == doctest::Approx(2.0 * 4.4).epsilon(1e-8));
}

TEST_CASE("shadows of a ball on the boundary") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const Vec src = vec2(0, 0);
  const Vec tgt = vec2(0.5, 0);

  // The ray straight through the target passes at distance ~0.
  CHECK(min_ray_distance(ball, src, circle_point(0.0), tgt) < 1e-4);
  // The opposite ray stays at least d(src, tgt) away.
  CHECK(min_ray_distance(ball, src, circle_point(M_PI), tgt) >=
        std::atanh(0.5) - 1e-9);

  const Shadow sh{kChart.to_projective(src), kChart.to_projective(tgt), 0.3,
                  ShadowVariant::Plain};
  CHECK(in_shadow(ball, sh, circle_point(0.0)));
  CHECK(!in_shadow(ball, sh, circle_point(M_PI)));
  CHECK(!in_shadow(ball, sh, circle_point(M_PI / 2)));
}

TEST_CASE("shadow variants nest") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const Vec src = vec2(0.8, 0.0);  // d(src, center) = atanh(0.8) > 2r
  const Vec tgt = vec2(-0.3, 0.1);
  const double r = 0.25;
  const HomogeneousPoint s = kChart.to_projective(src);
  const HomogeneousPoint t = kChart.to_projective(tgt);
  const Shadow plain{s, t, r, ShadowVariant::Plain};
  const Shadow big{s, t, r, ShadowVariant::Enlarged};
  const Shadow small{s, t, r, ShadowVariant::Contracted};

  int n_small = 0, n_plain = 0, n_big = 0;
  for (int i = 0; i < 64; ++i) {
    const HomogeneousPoint xi = circle_point(2.0 * M_PI * i / 64);
    const bool in_s = in_shadow(ball, small, xi);
    const bool in_p = in_shadow(ball, plain, xi);
    const bool in_b = in_shadow(ball, big, xi);
    if (in_s) CHECK(in_p);
    if (in_p) CHECK(in_b);
    n_small += in_s;
    n_plain += in_p;
    n_big += in_b;
  }
  // The shadow is a proper nonempty arc at every thickening.
  CHECK(n_small > 0);
  CHECK(n_big < 64);
  CHECK(n_small <= n_plain);
  CHECK(n_plain <= n_big);
}

TEST_CASE("cones over boundary sets") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const Vec x = vec2(0, 0);
  const Vec y = vec2(0.5, 0);
  const double r = 0.05;

  CHECK(in_cone(ball, ConeVariant::Expanded, x, BoundarySet::whole(), r, y, 16, 2));
  CHECK(in_cone(ball, ConeVariant::Contracted, x, BoundarySet::whole(), r, y, 16, 2));
  CHECK(!in_cone(ball, ConeVariant::Expanded, x, BoundarySet::empty(), r, y, 16, 2));

  // The nominal ray exits at angle 0; small thickenings keep every probed
  // ray inside a wide cap and some ray inside a tiny one.
  const BoundarySet wide = BoundarySet::angular_cap(vec2(1, 0), 1.2);
  const BoundarySet tiny = BoundarySet::angular_cap(vec2(1, 0), 0.02);
  const BoundarySet back = BoundarySet::angular_cap(vec2(-1, 0), 0.4);
  CHECK(in_cone(ball, ConeVariant::Contracted, x, wide, r, y, 16, 2));
  CHECK(in_cone(ball, ConeVariant::Expanded, x, tiny, r, y, 16, 2));
  CHECK(!in_cone(ball, ConeVariant::Contracted, x, tiny, r, y, 16, 2));
  CHECK(!in_cone(ball, ConeVariant::Expanded, x, back, r, y, 16, 2));
}

TEST_CASE("horoballs") {
  const ConvexDomain ball = ConvexDomain::unit_ball(2);
  const HomogeneousPoint xi = circle_point(0.0);
  const Horoball hb{xi, vec2(0, 0)};

  CHECK(in_horoball(ball, hb, vec2(0.4, 0.0)));
  CHECK(!in_horoball(ball, hb, vec2(-0.4, 0.0)));
  CHECK(!in_horoball(ball, hb, vec2(0, 0)));  // the anchor is on the sphere

  // Equivariance: g maps the horoball about xi to the one about g xi.
  const Mat g = rot(0.6) * boost_x(0.8);
  const ProjectiveTransform t(g);
  for (double a : {0.35, -0.2})
    for (double b : {0.0, 0.3}) {
      const Vec y = vec2(a, b);
      const Horoball img{t.apply(xi), apply_affine(g, vec2(0, 0))};
      CHECK(in_horoball(ball, img, apply_affine(g, y)) ==
            in_horoball(ball, hb, y));
    }
}
