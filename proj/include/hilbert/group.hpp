#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hilbert/classify.hpp"
#include "hilbert/domain.hpp"

namespace hilbert {

// Finitely generated subgroup of Aut(Omega).  The stored generator list is
// inverse-closed: inverses are appended at construction unless already
// present.  Construction runs a sampled orbit diagnostic (64 interior
// points): every generator must keep the samples inside the domain and, for
// exact bodies, preserve pairwise distances to 1e-9.
class GroupPresentation {
 public:
  struct Flags {
    bool expects_parabolics = false;
    // Marks a presentation known to be free on its generators; unlocks the
    // exact cyclic-word path for conjugacy enumeration.
    bool assume_free = false;
  };

  GroupPresentation(std::vector<Mat> generators,
                    std::vector<std::string> labels, ConvexDomain domain,
                    Flags flags);
  GroupPresentation(std::vector<Mat> generators,
                    std::vector<std::string> labels, ConvexDomain domain)
      : GroupPresentation(std::move(generators), std::move(labels),
                          std::move(domain), Flags{}) {}

  const ConvexDomain& domain() const { return domain_; }
  const Flags& flags() const { return flags_; }
  int generator_count() const { return static_cast<int>(gens_.size()); }
  const Mat& generator(int i) const { return gens_[static_cast<std::size_t>(i)]; }
  const std::string& label(int i) const {
    return labels_[static_cast<std::size_t>(i)];
  }
  int inverse_index(int i) const {
    return inverse_[static_cast<std::size_t>(i)];
  }
  // Number of user-supplied generators (prefix of the full list).
  int rank() const { return rank_; }

  double max_generator_displacement(const Vec& o) const;

 private:
  std::vector<Mat> gens_;
  std::vector<std::string> labels_;
  std::vector<int> inverse_;
  ConvexDomain domain_;
  Flags flags_;
  int rank_;
};

struct GroupElement {
  GroupElement(std::vector<std::int32_t> w, ProjectiveTransform t, double d)
      : word(std::move(w)), transform(std::move(t)), displacement(d) {}

  std::vector<std::int32_t> word;  // generator indices, empty = identity
  ProjectiveTransform transform;
  double displacement = 0.0;  // d(o, g o) for the enumeration basepoint

  const SpectralData& spectral(const ConvexDomain& domain) const;

 private:
  mutable std::shared_ptr<const SpectralData> spectral_cache_;
};

struct EnumerationOptions {
  // Pruning margin on top of the radius; negative means the default
  // 2 * max generator displacement.
  double margin = -1.0;
  // Hard cap on accepted elements.  Exceeding it throws ResourceError naming
  // the cap, unless stop_at_cap truncates the enumeration instead.
  std::size_t cap = 20'000'000;
  bool stop_at_cap = false;
  bool keep_words = true;
};

struct BallVisit {
  const Mat& matrix;  // valid only during the callback
  double displacement;
  std::uint64_t index;   // BFS discovery index of this element
  std::uint64_t parent;  // discovery index of the element it extends
  std::int32_t letter;   // generator index applied on the right, -1 for id
};

// Streaming breadth-first enumeration of {g : d(o, g o) <= t} with
// right-multiplication by generators, deduplication on quantized canonical
// matrices, and pruning at displacement > t + margin.  Visits arrive in BFS
// order; completeness rests on the margin heuristic (validated against
// unpruned enumeration in the tests).  `skeleton`, when set, is called for
// elements kept in the search frontier but outside the ball
// (t < displacement <= t + margin); parent chains of visited elements may
// pass through these.
void for_each_in_ball(
    const GroupPresentation& group, const Vec& o, double t,
    const EnumerationOptions& options,
    const std::function<void(const BallVisit&)>& visit,
    const std::function<void(const BallVisit&)>& skeleton = nullptr);

// Materialized enumeration, sorted by (displacement, word length, word).
std::vector<GroupElement> enumerate_metric_ball(
    const GroupPresentation& group, const Vec& o, double t,
    const EnumerationOptions& options = {});

// First `budget` elements in breadth-first word order (no metric pruning),
// used where a word ball rather than a metric ball is wanted.
std::vector<GroupElement> enumerate_word_ball(const GroupPresentation& group,
                                              const Vec& o,
                                              std::size_t budget);

// Attracting fixed points of the hyperbolic elements among the first
// `budget` elements in word order, deduplicated at 1e-9.  Throws
// ArgumentError when no hyperbolic element is found (elementary group).
std::vector<HomogeneousPoint> limit_set_sample(const GroupPresentation& group,
                                               std::size_t budget);

namespace detail {
// Quantized two-grid hash keys of a matrix's canonical form (unit Frobenius
// norm, first large entry positive); shared by enumeration dedup and the
// conjugacy-census lookups so both agree on what "the same element" means.
void canonical_matrix_keys(const Mat& m, std::uint64_t* k0, std::uint64_t* k1);
}  // namespace detail

}  // namespace hilbert
