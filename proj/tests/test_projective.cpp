#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "hilbert/classify.hpp"
#include "hilbert/domain.hpp"
#include "hilbert/numerics.hpp"
#include "hilbert/projective.hpp"

using namespace hilbert;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Linear SO(2,1) isometries of the Klein disk in chart 0, coordinates (T, X, Y).
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

// Integer unipotent Lorentz matrix (stabilizes a light-like direction).
// (A - I)^3 = 0, so the char poly is (x-1)^3 and the discriminant is exactly 0.
Mat cusp_gen() {
  Mat a(3, 3);
  a << 3, -2, 2, 2, -1, 2, 2, -2, 1;
  return a;
}

}  // namespace

TEST_CASE("canonical homogeneous representatives") {
  const Vec v = vec3(2.0, -4.0, 6.0);
  const HomogeneousPoint p(v);
  CHECK(p.coords().norm() == doctest::Approx(1.0).epsilon(1e-14));

  // Scalar multiples, including negative ones, give the same point.
  const HomogeneousPoint q(-0.37 * v);
  CHECK((p.coords() - q.coords()).norm() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.approx_equal(q, 1e-13));

  // Nearby but genuinely different points stay different.
  const HomogeneousPoint r(vec3(2.0, -4.0, 6.1));
  CHECK(!p.approx_equal(r, 1e-6));

  CHECK_THROWS_AS(HomogeneousPoint(vec3(0.0, 0.0, 0.0)), ArgumentError);
}

TEST_CASE("affine chart round trips") {
  const AffineChart chart(0, 3);
  const Vec x = vec2(0.3, -0.7);
  const HomogeneousPoint p = chart.to_projective(x);
  const Vec back = chart.to_affine(p);
  CHECK((back - x).norm() == doctest::Approx(0.0).epsilon(1e-14));

  // lift() is the raw section: first coordinate 1, rest the affine coords.
  const Vec lifted = chart.lift(x);
  CHECK(lifted(0) == 1.0);
  CHECK(lifted(1) == x(0));
  CHECK(lifted(2) == x(1));

  // A point on the hyperplane at infinity for this chart cannot be dehomogenized.
  const HomogeneousPoint inf(vec3(0.0, 1.0, 0.5));
  CHECK_THROWS_AS(chart.to_affine(inf), ChartError);

  // A different chart handles the same point fine.
  const AffineChart chart1(1, 3);
  const Vec y = chart1.to_affine(inf);
  CHECK(y.size() == 2);
}

TEST_CASE("projective transforms act projectively") {
  const Mat g = boost_x(0.9) * rot(0.4);
  const ProjectiveTransform t(g);
  const ProjectiveTransform t_scaled(17.0 * g);

  // The scale of the representative matrix is irrelevant to the action.
  const HomogeneousPoint p(vec3(1.0, 0.2, -0.5));
  CHECK(t.apply(p).approx_equal(t_scaled.apply(p), 1e-12));

  // Stored representative is normalized to |det| = 1.
  CHECK(std::abs(det3_accurate(t_scaled.matrix())) == doctest::Approx(1.0).epsilon(1e-12));

  const ProjectiveTransform u = t.inverse() * t;
  CHECK(u.apply(p).approx_equal(p, 1e-12));

  // Composition matches matrix multiplication.
  const ProjectiveTransform a(boost_x(0.5));
  const ProjectiveTransform b(rot(1.1));
  const HomogeneousPoint lhs = (a * b).apply(p);
  const HomogeneousPoint rhs = a.apply(b.apply(p));
  CHECK(lhs.approx_equal(rhs, 1e-12));
}

TEST_CASE("det_normalize rejects singular input") {
  Mat sing(3, 3);
  // Rank 2: third row is the sum of the first two.
  sing << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 5.0, 7.0, 9.0;
  CHECK_THROWS_AS(det_normalize(sing), ArgumentError);

  const Mat m = det_normalize(3.7 * boost_x(1.3));
  CHECK(std::abs(det3_accurate(m)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("compensated determinant survives large entries") {
  // L*U with unit diagonal has determinant exactly 1, but the product matrix
  // has entries near 1e10. The naive cofactor expansion evaluates differences
  // of terms near 1e15 and loses every significant digit of the answer; the
  // compensated version keeps the determinant to near machine precision.
  Mat l = Mat::Identity(3, 3);
  l(1, 0) = 98765.0;
  l(2, 0) = 54321.0;
  l(2, 1) = 77777.0;
  Mat u = Mat::Identity(3, 3);
  u(0, 1) = 88888.0;
  u(0, 2) = 12345.0;
  u(1, 2) = 99999.0;
  const Mat m = l * u;  // integer entries, exact in doubles
  CHECK(m.cwiseAbs().maxCoeff() > 1e9);
  CHECK(det3_accurate(m) == doctest::Approx(1.0).epsilon(1e-8));

  // Sanity on small matrices too.
  Mat s(3, 3);
  s << 2, 0, 1, -1, 3, 0, 0, 1, 4;
  CHECK(det3_accurate(s) == doctest::Approx(s.determinant()).epsilon(1e-14));
}

TEST_CASE("spectrum of a boost is biproximal") {
  const double s = 1.7;
  const Spectrum3 sp = spectrum_3x3(5.0 * boost_x(s));
  CHECK(sp.real_count == 3);
  CHECK(!sp.degenerate);
  CHECK(sp.scale == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(!sp.flipped);
  // Roots sorted by decreasing modulus: e^s, 1, e^-s.
  CHECK(sp.roots[0] == doctest::Approx(std::exp(s)).epsilon(1e-12));
  CHECK(sp.roots[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sp.roots[2] == doctest::Approx(std::exp(-s)).epsilon(1e-12));
  CHECK(sp.t == doctest::Approx(2.0 * std::cosh(s) + 1.0).epsilon(1e-13));
}

TEST_CASE("spectrum of a rotation has one real root") {
  const Spectrum3 sp = spectrum_3x3(rot(0.8));
  CHECK(sp.real_count == 1);
  CHECK(sp.roots[0] == doctest::Approx(1.0).epsilon(1e-12));
  // Complex pair on the unit circle.
  CHECK(sp.roots[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integer unipotents give an exactly zero discriminant") {
  // Small integer powers stay exact in doubles, and trace = adjugate trace = 3
  // exactly, so the discriminant evaluates to 0.0 with no rounding at all.
  // This is the case the self-aware tolerance must not misread as hyperbolic.
  Mat p = cusp_gen();
  for (int k = 1; k <= 8; ++k) {
    const Spectrum3 sp = spectrum_3x3(p);
    CAPTURE(k);
    CHECK(sp.disc == 0.0);
    CHECK(sp.degenerate);
    CHECK(sp.roots[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sp.roots[2] == doctest::Approx(1.0).epsilon(1e-9));
    p = p * cusp_gen();
  }
}

TEST_CASE("classification on the Klein disk") {
  const ConvexDomain dom = ConvexDomain::unit_ball(2);

  SUBCASE("hyperbolic boost") {
    const SpectralData sd = classify(ProjectiveTransform(boost_x(2.2)), dom);
    CHECK(sd.type == IsometryClass::Hyperbolic);
    CHECK(sd.translation_length == doctest::Approx(2.2).epsilon(1e-12));
    // Axis endpoints of a boost along x: (1, +-1, 0) projectively.
    const AffineChart chart(0, 3);
    const Vec plus = chart.to_affine(sd.attracting.value());
    const Vec minus = chart.to_affine(sd.repelling.value());
    CHECK(plus(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(plus(1) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(minus(0) == doctest::Approx(-1.0).epsilon(1e-10));
  }

  SUBCASE("powers scale translation length") {
    const Mat g = boost_x(2.2);
    const SpectralData sd = classify(ProjectiveTransform(g * g * g), dom);
    CHECK(sd.type == IsometryClass::Hyperbolic);
    CHECK(sd.translation_length == doctest::Approx(6.6).epsilon(1e-11));
  }

  SUBCASE("elliptic rotation") {
    const SpectralData sd = classify(ProjectiveTransform(rot(1.9)), dom);
    CHECK(sd.type == IsometryClass::Elliptic);
    CHECK(sd.translation_length == 0.0);
  }

  SUBCASE("parabolic integer unipotent") {
    const SpectralData sd = classify(ProjectiveTransform(cusp_gen()), dom);
    CHECK(sd.type == IsometryClass::Parabolic);
    CHECK(sd.translation_length == 0.0);
    // The fixed direction is light-like: on the boundary of the disk.
    const AffineChart chart(0, 3);
    const Vec fp = chart.to_affine(sd.attracting.value());
    CHECK(fp.norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("glide translation length from mixed-sign spectrum") {
  // diag(-2, -1/2, 1) has moduli {2, 1, 1/2}; the translation length only
  // depends on the modulus ratio of the extreme eigenvalues.
  Mat g = Mat::Zero(3, 3);
  g(0, 0) = -2.0;
  g(1, 1) = -0.5;
  g(2, 2) = 1.0;
  CHECK(translation_length(ProjectiveTransform(g)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("non-isometric spectra are refused") {
  // Semisimple with a repeated extreme modulus: not elliptic, not biproximal.
  Mat flat = Mat::Zero(3, 3);
  flat(0, 0) = 2.0;
  flat(1, 1) = 2.0;
  flat(2, 2) = 1.0;
  CHECK_THROWS_AS(classify(ProjectiveTransform(flat), ConvexDomain::unit_ball(2)),
                  ArgumentError);

  // Defective repeated root off the unit circle (quasi-hyperbolic).
  Mat qh = Mat::Zero(3, 3);
  qh(0, 0) = 2.0;
  qh(0, 1) = 1.0;
  qh(1, 1) = 2.0;
  qh(2, 2) = 0.25;
  CHECK_THROWS_AS(classify(ProjectiveTransform(qh), ConvexDomain::unit_ball(2)),
                  ArgumentError);
}

TEST_CASE("hyperbolicity prefilter matches the classifier") {
  const ConvexDomain dom = ConvexDomain::unit_ball(2);
  const std::vector<Mat> mats = {boost_x(2.2), rot(0.7), cusp_gen(),
                                 boost_x(1.1) * rot(2.0) * boost_x(-0.3)};
  for (const Mat& m : mats) {
    const Mat n = det_normalize(m);
    const bool maybe = detail::maybe_hyperbolic_3x3(n, 1e-7);
    const SpectralData sd = classify(ProjectiveTransform(m), dom);
    CAPTURE(m(0, 0));
    // The prefilter may overshoot but must never drop a hyperbolic element.
    if (sd.type == IsometryClass::Hyperbolic) CHECK(maybe);
  }
}

TEST_CASE("quadratic solver") {
  const auto r = solve_quadratic(1.0, 1.0, -6.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(solve_quadratic(1.0, 0.0, 1.0).empty());
  // Linear degeneration.
  const auto lin = solve_quadratic(0.0, 2.0, -5.0);
  REQUIRE(lin.size() == 1);
  CHECK(lin[0] == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("line fit and rank correlation") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 12; ++i) {
    xs.push_back(0.5 * i);
    ys.push_back(3.25 - 1.75 * xs.back());
  }
  const SlopeFit f = fit_line(xs, ys);
  CHECK(f.slope == doctest::Approx(-1.75).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(f.slope_stderr == doctest::Approx(0.0).epsilon(1e-10));

  const TrendTest up = kendall_tau(xs, xs);
  CHECK(up.tau == doctest::Approx(1.0));
  const TrendTest down = kendall_tau(xs, ys);
  CHECK(down.tau == doctest::Approx(-1.0));
  CHECK(std::abs(down.z) > 3.0);
}

TEST_CASE("pairwise summation accuracy") {
  std::vector<double> xs(100000, 0.1);
  CHECK(pairwise_sum(xs) == doctest::Approx(10000.0).epsilon(1e-13));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(pairwise_sum(std::vector<double>{42.0}) == 42.0);
}

TEST_CASE("seeded rng streams") {
  SplitMix64 a(12345);
  SplitMix64 b(12345);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  SplitMix64 c(stream_rng(7, 0).next());
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.below(10) < 10);
  }

  // Distinct streams from the same base seed decorrelate immediately.
  CHECK(stream_rng(7, 0).next() != stream_rng(7, 1).next());
}

TEST_CASE("weighted sampling respects weights") {
  WeightedSampler sampler(std::vector<double>{2.0, 0.0, 6.0});
  SplitMix64 rng(99);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 20000; ++i) counts[sampler.sample(rng)]++;
  CHECK(counts[1] == 0);
  const double ratio = static_cast<double>(counts[2]) / counts[0];
  CHECK(ratio > 2.5);
  CHECK(ratio < 3.5);
}

TEST_CASE("sphere mesh") {
  const auto dirs2 = sphere_mesh(2, 8);
  CHECK(dirs2.size() == 8);
  std::set<std::pair<double, double>> seen;
  for (const Vec& d : dirs2) {
    CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-12));
    seen.insert({d(0), d(1)});
  }
  CHECK(seen.size() == 8);

  for (const Vec& d : sphere_mesh(3, 40))
    CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scalar solvers") {
  const double root = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-13);
  CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const double nroot = newton_bisect([](double x) { return x * x - 2.0; },
                                     [](double x) { return 2.0 * x; }, 0.0, 2.0, 1e-13);
  CHECK(nroot == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  const auto gm = golden_min([](double x) { return (x - 1.3) * (x - 1.3); }, 0.0, 3.0, 1e-9);
  CHECK(gm.first == doctest::Approx(1.3).epsilon(1e-6));
  CHECK(gm.second == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("bootstrap standard error is positive for spread data") {
  std::vector<double> xs;
  SplitMix64 rng(4);
  for (int i = 0; i < 400; ++i) xs.push_back(rng.normal());
  const double se = bootstrap_stderr(xs, 200, rng);
  // Standard error of the mean of 400 unit normals is about 0.05.
  CHECK(se > 0.02);
  CHECK(se < 0.09);
}
