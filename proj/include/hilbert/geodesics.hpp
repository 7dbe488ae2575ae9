#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hilbert/group.hpp"

namespace hilbert {

// One oriented conjugacy class of primitive hyperbolic elements; the class
// of the inverse is listed separately unless the two are genuinely
// conjugate (which happens for axes through order-2 elliptic fixed points).
struct ClosedGeodesic {
  GroupElement representative;  // minimal-displacement class member found
  double length;                // translation length of the class
  HomogeneousPoint backward;    // repelling axis endpoint of representative
  HomogeneousPoint forward;     // attracting axis endpoint
  bool oriented = true;
};

enum class CensusPath {
  Auto,      // FreeWords when the presentation is flagged free, else Axis
  Axis,      // conjugacy dedup via axis data on an enumerated metric ball
  FreeWords  // exact cyclically-reduced-word enumeration (free groups only)
};

struct GeodesicEnumOptions {
  CensusPath path = CensusPath::Auto;
  // Cap forwarded to the underlying ball enumeration (axis path).
  std::size_t cap = 20'000'000;
  // Ball-enumeration pruning margin; negative selects the default.
  double margin = -1.0;
  // Representative words cost memory proportional to the enumerated ball;
  // counting-only callers can switch them off.
  bool keep_words = true;
};

// One ClosedGeodesic per oriented conjugacy class of primitive hyperbolic
// elements with length <= max_length, sorted by (length, representative
// word).  Primitivity is certified by searching for an m-th root of the
// representative among the enumerated candidates.
std::vector<ClosedGeodesic> enumerate_primitive_geodesics(
    const GroupPresentation& group, double max_length,
    const GeodesicEnumOptions& options = {});

// Reduces points into an approximate Dirichlet domain about o.  The
// reduction set is the generators plus the metric ball of radius twice the
// sampled diameter estimate; reduce() greedily applies the best element
// until no member improves the distance to o.
class DirichletReducer {
 public:
  DirichletReducer(const GroupPresentation& group, Vec o);

  // Returns (x', gamma) with x' = gamma x and
  // d(o, x') <= d(o, s x') + 1e-9 for every s in the reduction set.
  // Reducing an already-minimal point returns the identity.
  std::pair<Vec, GroupElement> reduce(const Vec& x) const;

  double diameter_estimate() const { return diameter_; }
  std::size_t reduction_set_size() const { return set_.size(); }

 private:
  const GroupPresentation* group_;
  Vec o_;
  double diameter_;
  std::vector<GroupElement> set_;
};

// One-shot convenience wrapper; builds a fresh reducer per call, so loops
// should construct a DirichletReducer once instead.
std::pair<Vec, GroupElement> dirichlet_reduce(const GroupPresentation& group,
                                              const Vec& o, const Vec& x);

}  // namespace hilbert
