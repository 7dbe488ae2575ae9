#pragma once

// Independent reference implementations checked against the production code
// paths: closed forms on the Klein ball, truncated Busemann differences,
// unpruned orbit enumeration with pairwise-comparison dedup, and an
// exhaustive cyclic-word census.  Used by the test suite and the `oracle`
// subcommand; deliberately avoids the hashing, pruning, and adaptive
// machinery it is meant to validate.

#include <cstdint>
#include <vector>

#include "hilbert/group.hpp"

namespace hilbert {

// Closed-form values on the unit-ball domain (curvature -1 Klein model).
double klein_distance(const Vec& x, const Vec& y);
double klein_busemann(const Vec& xi, const Vec& x, const Vec& y);
// Gromov product of two boundary points based at the origin.
double klein_gromov(const Vec& xi, const Vec& eta);

// Finite-horizon Busemann difference d(x, z_T) - d(y, z_T) with z_T on the
// ray [x, xi) at distance T, straight from the defining limit (two genuine
// distance evaluations, no chord algebra).
double busemann_direct(const ConvexDomain& domain, const HomogeneousPoint& xi,
                       const Vec& x, const Vec& y, double T);

// Sign-fixed unit-Frobenius representative of a projective matrix; the same
// convention the production dedup uses, recomputed from scratch so a
// convention bug shows up as a disagreement instead of being masked.  Scale
// only, no determinant: stays meaningful for products so long that rounding
// has eaten their determinant.
Mat reference_form(const Mat& m);

// Every distinct orbit product of word length <= max_len with displacement
// d(o, g o) <= t.  Deduplication is pairwise comparison of reference forms;
// no hashing, no metric pruning.
struct BruteOrbit {
  std::vector<Mat> elements;  // includes the identity
  std::vector<double> displacement;
};
BruteOrbit brute_force_ball(const GroupPresentation& group, const Vec& o,
                            double t, int max_len);

// Primitive conjugacy classes of a free group by exhaustive cyclic words:
// every cyclically reduced word of length <= max_len, one representative per
// rotation orbit (the lexicographically smallest), periodic words dropped,
// translation lengths <= l_max reported sorted by (length, word).
struct CyclicClass {
  std::vector<std::int32_t> word;
  double length;
};
std::vector<CyclicClass> cyclic_word_census(const GroupPresentation& group,
                                            double l_max, int max_len);

}  // namespace hilbert
