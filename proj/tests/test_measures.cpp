#include <doctest.h>

#include <cmath>
#include <vector>

#include "hilbert/busemann.hpp"
#include "hilbert/domain.hpp"
#include "hilbert/group.hpp"
#include "hilbert/io.hpp"
#include "hilbert/measures.hpp"
#include "hilbert/metric.hpp"
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

Mat boost_y(double s) {
  Mat m = Mat::Identity(3, 3);
  m(0, 0) = std::cosh(s);
  m(0, 2) = std::sinh(s);
  m(2, 0) = std::sinh(s);
  m(2, 2) = std::cosh(s);
  return m;
}

GroupPresentation schottky() {
  GroupPresentation::Flags flags;
  flags.assume_free = true;
  return GroupPresentation({boost_x(2.2), boost_y(2.8)}, {"a", "b"},
                           ConvexDomain::unit_ball(2), flags);
}

GroupPresentation cusped() {
  const GeneratorFile gf =
      load_generators(std::string(HILBERT_DATA_DIR) + "/modular_cusped.gens");
  GroupPresentation::Flags flags;
  flags.expects_parabolics = true;
  return GroupPresentation(gf.matrices, gf.labels, ConvexDomain::unit_ball(2),
                           flags);
}

}  // namespace

TEST_CASE("poincare series") {
  const GroupPresentation g = schottky();
  const Vec o = vec2(0, 0);
  const double R = 10.0;

  const PoincareValue p3 = poincare_series(g, 0.3, o, R);
  const PoincareValue p6 = poincare_series(g, 0.6, o, R);
  const PoincareValue p10 = poincare_series(g, 1.0, o, R);

  // Strictly decreasing in s, and never below the identity term.
  CHECK(p3.value > p6.value);
  CHECK(p6.value > p10.value);
  CHECK(p10.value > 1.0);

  // Far above the growth exponent the tail decays inside radius 10; far
  // below it the shells still grow.
  CHECK(p10.tail_decayed);
  CHECK(!poincare_series(g, 0.1, o, R).tail_decayed);
}

TEST_CASE("critical exponent estimators agree") {
  const GroupPresentation g = schottky();
  const Vec o = vec2(0, 0);
  const double R = 13.0;

  const CriticalExponentEstimate slope =
      estimate_critical_exponent(g, o, R, ExponentMethod::Slope);
  const CriticalExponentEstimate bracket =
      estimate_critical_exponent(g, o, R, ExponentMethod::SeriesBracket);

  CHECK(slope.method == ExponentMethod::Slope);
  CHECK(bracket.method == ExponentMethod::SeriesBracket);
  CHECK(slope.window_lo < slope.window_hi);
  CHECK(slope.stderr_value >= 0.0);

  // Both land in the plausible range for this Schottky group and agree to
  // desk-scale accuracy.
  CHECK(slope.delta_hat > 0.2);
  CHECK(slope.delta_hat < 0.9);
  CHECK(bracket.delta_hat > 0.2);
  CHECK(bracket.delta_hat < 0.9);
  CHECK(std::abs(slope.delta_hat - bracket.delta_hat) < 0.15);

  // Too small a ball for a trustworthy fit is refused.
  CHECK_THROWS_AS(estimate_critical_exponent(g, o, 5.0), ResourceError);
}

TEST_CASE("patterson-sullivan approximation at the orbit basepoint") {
  const GroupPresentation g = schottky();
  const Vec o = vec2(0, 0);
  const double s = 0.7;
  const double R = 12.0;
  const AtomicMeasure mu = patterson_sullivan(g, o, o, s, R, 0.45);

  // Normalizing at the orbit basepoint makes mass(o) = 1 by construction.
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mu.s == s);
  CHECK(mu.radius == R);
  CHECK(mu.normalization_mode == "basepoint-o");

  // The normalization is the series value at o.
  const PoincareValue series = poincare_series(g, s, o, R);
  CHECK(mu.normalization == doctest::Approx(series.value).epsilon(1e-12));

  CHECK(!mu.atoms.empty());
  for (const Atom& a : mu.atoms) {
    CHECK(a.weight > 0.0);
    CHECK(a.displacement <= R + 1e-12);
  }

  // The exponent floor is enforced.
  CHECK_THROWS_AS(patterson_sullivan(g, o, o, 0.4, R, 0.45), ArgumentError);
}

TEST_CASE("patterson-sullivan weights follow the defining formula") {
  const GroupPresentation g = schottky();
  const Vec o = vec2(0, 0);
  const Vec x = vec2(0.2, -0.3);
  const double s = 0.8;
  const double R = 10.0;
  const AtomicMeasure mu = patterson_sullivan(g, o, x, s, R, 0.45);
  const ConvexDomain& dom = g.domain();
  const AffineChart chart(0, 3);

  CHECK((mu.basepoint - x).norm() == 0.0);
  CHECK((mu.orbit_basepoint - o).norm() == 0.0);

  double recomputed = 0.0;
  for (const Atom& a : mu.atoms) {
    const Vec pos = chart.to_affine(a.point);
    const double d = hilbert_distance_affine(dom, pos, x);
    CHECK(a.weight * mu.normalization ==
          doctest::Approx(std::exp(-s * d)).epsilon(1e-9));
    recomputed += a.weight;
  }
  CHECK(recomputed == doctest::Approx(mu.total_mass()).epsilon(1e-12));

  // Moving the evaluation point changes the mass but not the atom support.
  const AtomicMeasure mu_o = patterson_sullivan(g, o, o, s, R, 0.45);
  CHECK(mu.atoms.size() == mu_o.atoms.size());
  CHECK(mu.total_mass() != doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("set mass and shadow mass") {
  const GroupPresentation g = schottky();
  const Vec o = vec2(0, 0);
  const AtomicMeasure mu = patterson_sullivan(g, o, o, 0.7, 12.0, 0.45);

  // Whole and empty sets bracket everything.
  CHECK(set_mass(mu, BoundarySet::whole()) == mu.total_mass());
  CHECK(set_mass(mu, BoundarySet::empty()) == 0.0);

  // Complementary-ish caps: each is a strict part of the total.
  const double m_right = set_mass(mu, BoundarySet::angular_cap(vec2(1, 0), 0.8));
  const double m_left = set_mass(mu, BoundarySet::angular_cap(vec2(-1, 0), 0.8));
  CHECK(m_right > 0.0);
  CHECK(m_left > 0.0);
  CHECK(m_right < mu.total_mass());
  CHECK(m_right + m_left <= mu.total_mass() + 1e-12);

  // A shadow aimed down the a-axis catches the a-side of the orbit.
  const AffineChart chart(0, 3);
  const Vec a_o = ProjectiveTransform(boost_x(2.2)).apply_affine(chart, o);
  const Shadow sh{chart.to_projective(o), chart.to_projective(a_o), 2.0,
                  ShadowVariant::Plain};
  const double m_shadow = shadow_mass(g.domain(), mu, sh);
  CHECK(m_shadow > 0.0);
  CHECK(m_shadow <= mu.total_mass() + 1e-12);
}

TEST_CASE("sullivan density") {
  const GroupPresentation g = schottky();
  const Vec o = vec2(0, 0);
  const AtomicMeasure mu = patterson_sullivan(g, o, o, 0.7, 10.0, 0.45);
  const ConvexDomain& dom = g.domain();
  const AffineChart chart(0, 3);
  const double delta = 0.44;

  const HomogeneousPoint xi = chart.to_projective(vec2(1, 0));
  const HomogeneousPoint eta = chart.to_projective(vec2(0, 1));
  const double d1 = sullivan_density(dom, mu, xi, eta, delta);
  const double d2 = sullivan_density(dom, mu, eta, xi, delta);
  CHECK(d1 > 0.0);
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
  CHECK(d1 == doctest::Approx(std::exp(2.0 * delta *
                                       gromov_product(dom, o, xi, eta)))
                  .epsilon(1e-12));
  CHECK_THROWS_AS(sullivan_density(dom, mu, xi, xi, delta), ArgumentError);
}

TEST_CASE("cusp series bound") {
  const GroupPresentation g = cusped();
  const Vec o = vec2(0, 0);
  const double r = 2.0;

  // The orbit of the parabolic subgroup grows logarithmically, so at
  // delta = 1 the shell sums die off quickly.
  const CuspSeriesBound b = cusp_series_bound(g, {0}, o, 1.0, r, 12.0);
  CHECK(b.value > 0.0);
  CHECK(b.shells_decay);

  // The trivial subgroup contributes only the identity term (d = 0).
  const CuspSeriesBound trivial = cusp_series_bound(g, {}, o, 1.0, r, 12.0);
  CHECK(trivial.value == 2.0 * r);
  CHECK(trivial.shells_decay);

  // Marking a non-parabolic generator is an error.
  const GroupPresentation s = schottky();
  CHECK_THROWS_AS(cusp_series_bound(s, {0}, o, 1.0, r, 12.0), ArgumentError);
}
