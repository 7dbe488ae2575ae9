#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "hilbert/classify.hpp"
#include "hilbert/domain.hpp"
#include "hilbert/geodesics.hpp"
#include "hilbert/group.hpp"
#include "hilbert/io.hpp"
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

GroupPresentation triangle() {
  const GeneratorFile gf =
      load_generators(std::string(HILBERT_DATA_DIR) + "/triangle237.gens");
  return GroupPresentation(gf.matrices, gf.labels, ConvexDomain::unit_ball(2));
}

GroupPresentation cusped() {
  const GeneratorFile gf =
      load_generators(std::string(HILBERT_DATA_DIR) + "/modular_cusped.gens");
  GroupPresentation::Flags flags;
  flags.expects_parabolics = true;
  return GroupPresentation(gf.matrices, gf.labels, ConvexDomain::unit_ball(2),
                           flags);
}

// Match two element lists up to projective equality, order-insensitively.
bool same_element_set(const std::vector<GroupElement>& lib,
                      const std::vector<Mat>& oracle) {
  if (lib.size() != oracle.size()) return false;
  std::vector<bool> used(oracle.size(), false);
  for (const GroupElement& g : lib) {
    const Mat ref = reference_form(g.transform.matrix());
    bool found = false;
    for (std::size_t j = 0; j < oracle.size(); ++j) {
      if (used[j]) continue;
      if ((reference_form(oracle[j]) - ref).cwiseAbs().maxCoeff() < 1e-8) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("presentation closes under inverses") {
  const GroupPresentation g = schottky();
  CHECK(g.rank() == 2);
  CHECK(g.generator_count() == 4);
  CHECK(g.label(0) == "a");
  CHECK(g.label(1) == "b");

  for (int i = 0; i < g.generator_count(); ++i) {
    const int j = g.inverse_index(i);
    CHECK(g.inverse_index(j) == i);
    const Mat prod = g.generator(i) * g.generator(j);
    CHECK((prod - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  }

  // An involution must not get a second copy: the triangle group's order-2
  // rotator is its own inverse.
  const GroupPresentation t = triangle();
  bool has_involution = false;
  for (int i = 0; i < t.generator_count(); ++i)
    if (t.inverse_index(i) == i) has_involution = true;
  CHECK(has_involution);

  CHECK(g.max_generator_displacement(vec2(0, 0)) ==
        doctest::Approx(2.8).epsilon(1e-12));
}

TEST_CASE("non-isometries are rejected at construction") {
  Mat bad = Mat::Identity(3, 3);
  bad(1, 1) = 1.7;  // squashes the disk, no projective automorphism
  CHECK_THROWS_AS(GroupPresentation({bad}, {"g"}, ConvexDomain::unit_ball(2)),
                  ArgumentError);
}

TEST_CASE("metric ball agrees with the unpruned oracle on a free group") {
  const GroupPresentation g = schottky();
  const Vec o = vec2(0, 0);
  const double t = 5.0;
  const auto ball = enumerate_metric_ball(g, o, t);
  // Generators displace by at least 2.2, so words of length 3 already leave
  // the radius-5 ball; length 4 is a safe oracle horizon.
  const BruteOrbit oracle = brute_force_ball(g, o, t, 4);

  CHECK(ball.size() == oracle.elements.size());
  CHECK(same_element_set(ball, oracle.elements));
  for (const GroupElement& e : ball) CHECK(e.displacement <= t + 1e-12);
  CHECK(std::is_sorted(ball.begin(), ball.end(),
                       [](const GroupElement& a, const GroupElement& b) {
                         return a.displacement < b.displacement;
                       }));
  // Identity comes first.
  CHECK(ball.front().word.empty());
  CHECK(ball.front().displacement == 0.0);
}

TEST_CASE("metric ball agrees with the unpruned oracle with relations") {
  // Small radius on the triangle group: the ball holds the finite stabilizer
  // orbit pieces (rotators about nearby vertices), where hashing dedup must
  // agree with pairwise comparison despite many distinct words per element.
  const GroupPresentation g = triangle();
  const Vec o = vec2(0, 0);
  const double t = 1.0;
  const auto ball = enumerate_metric_ball(g, o, t);
  const BruteOrbit oracle = brute_force_ball(g, o, t, 6);
  CHECK(ball.size() == oracle.elements.size());
  CHECK(same_element_set(ball, oracle.elements));
  CHECK(ball.size() > 3);  // identity plus several elliptic elements
}

TEST_CASE("metric ball about a shifted basepoint") {
  const GroupPresentation g = schottky();
  const Vec x0 = vec2(0.3, 0.1);
  const auto ball = enumerate_metric_ball(g, x0, 5.0);
  const ConvexDomain& dom = g.domain();
  for (const GroupElement& e : ball) {
    const Vec gx0 = e.transform.apply_affine(AffineChart(0, 3), x0);
    CHECK(e.displacement ==
          doctest::Approx(hilbert_distance_affine(dom, x0, gx0)).epsilon(1e-10));
    CHECK(e.displacement <= 5.0 + 1e-12);
  }
  // Distinctness under the canonical two-grid keys.
  std::set<std::uint64_t> keys;
  for (const GroupElement& e : ball) {
    std::uint64_t k0 = 0, k1 = 0;
    detail::canonical_matrix_keys(e.transform.matrix(), &k0, &k1);
    keys.insert(k0);
  }
  CHECK(keys.size() == ball.size());
}

TEST_CASE("word ball enumerates in breadth-first order") {
  const GroupPresentation g = schottky();
  const auto words = enumerate_word_ball(g, vec2(0, 0), 30);
  CHECK(words.size() == 30);
  CHECK(words.front().word.empty());
  for (std::size_t i = 1; i < words.size(); ++i)
    CHECK(words[i].word.size() >= words[i - 1].word.size());
  // Words arrive freely reduced: no letter followed by its inverse.
  for (const GroupElement& e : words)
    for (std::size_t i = 1; i < e.word.size(); ++i)
      CHECK(e.word[i] != g.inverse_index(e.word[i - 1]));
}

TEST_CASE("limit set samples lie on the boundary") {
  const GroupPresentation g = schottky();
  const auto pts = limit_set_sample(g, 200);
  CHECK(pts.size() >= 4);
  const AffineChart chart(0, 3);
  std::set<std::pair<long, long>> distinct;
  for (const HomogeneousPoint& xi : pts) {
    const Vec a = chart.to_affine(xi);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-7));
    distinct.insert({std::lround(a(0) * 1e6), std::lround(a(1) * 1e6)});
  }
  CHECK(distinct.size() == pts.size());
}

TEST_CASE("free-word and axis census paths agree") {
  const GroupPresentation g = schottky();
  const double l_max = 5.0;

  GeodesicEnumOptions free_opts;
  free_opts.path = CensusPath::FreeWords;
  GeodesicEnumOptions axis_opts;
  axis_opts.path = CensusPath::Axis;
  const auto by_words = enumerate_primitive_geodesics(g, l_max, free_opts);
  const auto by_axes = enumerate_primitive_geodesics(g, l_max, axis_opts);

  REQUIRE(by_words.size() == by_axes.size());
  CHECK(by_words.size() >= 4);  // both generators and their inverses at least
  for (std::size_t i = 0; i < by_words.size(); ++i) {
    CHECK(by_words[i].length ==
          doctest::Approx(by_axes[i].length).epsilon(1e-7));
    CHECK(by_words[i].length > 0.0);
    CHECK(by_words[i].length <= l_max + 1e-9);
  }
  CHECK(std::is_sorted(by_words.begin(), by_words.end(),
                       [](const ClosedGeodesic& a, const ClosedGeodesic& b) {
                         return a.length < b.length;
                       }));

  // Auto resolves to the free path for a flagged-free presentation.
  const auto by_auto = enumerate_primitive_geodesics(g, l_max, {});
  CHECK(by_auto.size() == by_words.size());

  // The generators themselves appear with their exact translation lengths.
  CHECK(by_words.front().length == doctest::Approx(2.2).epsilon(1e-10));
}

TEST_CASE("census against the exhaustive cyclic-word oracle") {
  const GroupPresentation g = schottky();
  const auto lib = enumerate_primitive_geodesics(g, 6.0, {});
  const auto oracle = cyclic_word_census(g, 6.0, 5);
  REQUIRE(lib.size() == oracle.size());
  for (std::size_t i = 0; i < lib.size(); ++i)
    CHECK(lib[i].length == doctest::Approx(oracle[i].length).epsilon(1e-7));
}

TEST_CASE("census on a group with torsion") {
  const GroupPresentation g = triangle();
  GeodesicEnumOptions opts;
  opts.path = CensusPath::Axis;
  const auto geos = enumerate_primitive_geodesics(g, 6.0, opts);
  CHECK(!geos.empty());
  const AffineChart chart(0, 3);
  for (const ClosedGeodesic& c : geos) {
    // No elliptic or near-identity noise in a census of closed geodesics.
    CHECK(c.length > 0.5);
    CHECK(c.length <= 6.0 + 1e-9);
    CHECK(chart.to_affine(c.forward).norm() == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(chart.to_affine(c.backward).norm() == doctest::Approx(1.0).epsilon(1e-7));
    // The representative really translates by the reported length.
    CHECK(translation_length(c.representative.transform) ==
          doctest::Approx(c.length).epsilon(1e-9));
  }
  // Determinism: a second run reproduces the census exactly.
  const auto again = enumerate_primitive_geodesics(g, 6.0, opts);
  REQUIRE(again.size() == geos.size());
  for (std::size_t i = 0; i < geos.size(); ++i)
    CHECK(again[i].length == geos[i].length);
}

TEST_CASE("dirichlet reduction") {
  const GroupPresentation g = triangle();
  const Vec o = vec2(0, 0);
  const DirichletReducer red(g, o);
  const ConvexDomain& dom = g.domain();
  CHECK(red.diameter_estimate() > 0.0);
  CHECK(red.reduction_set_size() >= static_cast<std::size_t>(g.generator_count()));

  const AffineChart chart(0, 3);
  for (const Vec& x : {vec2(0.93, 0.15), vec2(-0.7, 0.55), vec2(0.05, -0.9)}) {
    const auto [xr, gamma] = red.reduce(x);
    // The reduced point is the image of x and no farther from o.
    CHECK((gamma.transform.apply_affine(chart, x) - xr).norm() < 1e-9);
    CHECK(hilbert_distance_affine(dom, o, xr) <=
          hilbert_distance_affine(dom, o, x) + 1e-9);
    // Dirichlet inequality against every generator.
    for (int i = 0; i < g.generator_count(); ++i) {
      const Vec sx = ProjectiveTransform(g.generator(i)).apply_affine(chart, xr);
      CHECK(hilbert_distance_affine(dom, o, xr) <=
            hilbert_distance_affine(dom, o, sx) + 1e-6);
    }
    // Reducing a reduced point is a no-op via the identity.
    const auto [xr2, gamma2] = red.reduce(xr);
    CHECK(gamma2.word.empty());
    CHECK((xr2 - xr).norm() < 1e-12);
  }
}

TEST_CASE("parabolic generators of the cusped lattice") {
  const GroupPresentation g = cusped();
  const ConvexDomain& dom = g.domain();
  for (int i = 0; i < g.generator_count(); ++i) {
    const SpectralData sd = classify(ProjectiveTransform(g.generator(i)), dom);
    CHECK(sd.type == IsometryClass::Parabolic);
  }
  // d(o, A o) = arcosh(3) for the integer unipotent generator.
  const Vec o = vec2(0, 0);
  const AffineChart chart(0, 3);
  const Vec ao = ProjectiveTransform(g.generator(0)).apply_affine(chart, o);
  CHECK(hilbert_distance_affine(dom, o, ao) ==
        doctest::Approx(std::acosh(3.0)).epsilon(1e-12));

  const auto ball = enumerate_metric_ball(g, o, 3.5);
  CHECK(ball.size() >= 5);
  for (const GroupElement& e : ball) CHECK(e.displacement <= 3.5 + 1e-12);
}
