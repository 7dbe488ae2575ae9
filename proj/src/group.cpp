#include "hilbert/group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hilbert/metric.hpp"
#include "hilbert/numerics.hpp"

namespace hilbert {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Scale factor that maps a matrix to its canonical form: unit Frobenius
// norm, first entry of modulus above 1e-3 (relative) made positive.
double canonical_scale(const double* m, int nn) {
  double fro = 0.0;
  for (int i = 0; i < nn; ++i) fro += m[i] * m[i];
  fro = std::sqrt(fro);
  double sign = 1.0;
  for (int i = 0; i < nn; ++i) {
    if (std::abs(m[i]) > 1e-3 * fro) {
      sign = m[i] < 0.0 ? -1.0 : 1.0;
      break;
    }
  }
  return sign / fro;
}

Mat canonical_form(const Mat& m) {
  return m * canonical_scale(m.data(), static_cast<int>(m.size()));
}

// Two hash keys of the canonical matrix: one on the 1e-9 quantization grid
// and one on the half-shifted grid.  A duplicate arrival whose entries
// drifted across a bin edge still matches on the other grid unless two
// different entries straddle the two different edge types at once; at desk
// scale that residual risk is ~1e-5 of arrivals and only perturbs the large
// statistical counts, never the small exact enumerations.
void canonical_keys(const double* m, int nn, std::uint64_t* k0,
                    std::uint64_t* k1) {
  const double scale = canonical_scale(m, nn) * 1e9;
  std::uint64_t h0 = 0x6A09E667F3BCC909ULL;
  std::uint64_t h1 = 0xBB67AE8584CAA73BULL;
  for (int i = 0; i < nn; ++i) {
    const double c = m[i] * scale;
    h0 = mix64(h0 ^ static_cast<std::uint64_t>(std::llround(c)));
    h1 = mix64(h1 ^ static_cast<std::uint64_t>(std::llround(c + 0.5)));
  }
  *k0 = h0 ? h0 : 1;
  *k1 = h1 ? h1 : 1;
}

// Open-addressed set of nonzero 64-bit keys with linear probing.
class KeySet {
 public:
  KeySet() : slots_(1u << 16, 0), count_(0) {}

  bool contains(std::uint64_t k) const {
    std::size_t i = static_cast<std::size_t>(k) & (slots_.size() - 1);
    while (slots_[i] != 0) {
      if (slots_[i] == k) return true;
      i = (i + 1) & (slots_.size() - 1);
    }
    return false;
  }

  void insert(std::uint64_t k) {
    if ((count_ + 1) * 5 > slots_.size() * 3) grow();
    std::size_t i = static_cast<std::size_t>(k) & (slots_.size() - 1);
    while (slots_[i] != 0) {
      if (slots_[i] == k) return;
      i = (i + 1) & (slots_.size() - 1);
    }
    slots_[i] = k;
    ++count_;
  }

 private:
  void grow() {
    std::vector<std::uint64_t> old;
    old.swap(slots_);
    slots_.assign(old.size() * 2, 0);
    count_ = 0;
    for (std::uint64_t k : old)
      if (k) {
        std::size_t i = static_cast<std::size_t>(k) & (slots_.size() - 1);
        while (slots_[i] != 0) i = (i + 1) & (slots_.size() - 1);
        slots_[i] = k;
        ++count_;
      }
  }

  std::vector<std::uint64_t> slots_;
  std::size_t count_;
};

}  // namespace

namespace detail {
void canonical_matrix_keys(const Mat& m, std::uint64_t* k0, std::uint64_t* k1) {
  canonical_keys(m.data(), static_cast<int>(m.size()), k0, k1);
}
}  // namespace detail

GroupPresentation::GroupPresentation(std::vector<Mat> generators,
                                     std::vector<std::string> labels,
                                     ConvexDomain domain, Flags flags)
    : domain_(std::move(domain)), flags_(flags) {
  if (generators.empty())
    throw ArgumentError("GroupPresentation: generator list is empty");
  const int n = domain_.dim() + 1;
  rank_ = static_cast<int>(generators.size());
  if (labels.empty()) {
    for (int i = 0; i < rank_; ++i)
      labels.push_back("g" + std::to_string(i + 1));
  }
  if (static_cast<int>(labels.size()) != rank_)
    throw ArgumentError("GroupPresentation: label count mismatch");

  for (int i = 0; i < rank_; ++i) {
    if (generators[static_cast<std::size_t>(i)].rows() != n ||
        generators[static_cast<std::size_t>(i)].cols() != n)
      throw ArgumentError("GroupPresentation: generator dimension mismatch");
    gens_.push_back(det_normalize(generators[static_cast<std::size_t>(i)]));
    labels_.push_back(labels[static_cast<std::size_t>(i)]);
  }

  // Close under inverses; involutions and explicitly supplied inverses are
  // recognized by canonical-form comparison.
  inverse_.assign(gens_.size(), -1);
  for (int i = 0; i < rank_; ++i) {
    if (inverse_[static_cast<std::size_t>(i)] >= 0) continue;
    const Mat inv = det_normalize(gens_[static_cast<std::size_t>(i)].inverse());
    const Mat inv_canon = canonical_form(inv);
    int found = -1;
    for (std::size_t j = 0; j < gens_.size(); ++j) {
      if ((canonical_form(gens_[j]) - inv_canon).lpNorm<Eigen::Infinity>() <
          1e-10) {
        found = static_cast<int>(j);
        break;
      }
    }
    if (found < 0) {
      gens_.push_back(inv);
      labels_.push_back(labels_[static_cast<std::size_t>(i)] + "^-1");
      inverse_.push_back(i);
      found = static_cast<int>(gens_.size()) - 1;
    }
    inverse_[static_cast<std::size_t>(i)] = found;
    inverse_[static_cast<std::size_t>(found)] = i;
  }

  // Domain-preservation diagnostic on 64 sampled interior points: images
  // must stay inside, and for exact bodies sampled pairwise distances must
  // be preserved (a projective map preserving the domain is an isometry).
  const Vec center = domain_.center();
  std::vector<Vec> samples;
  const auto dirs = sphere_mesh(domain_.dim(), 16);
  const double radii[] = {0.3, 0.6, 0.9, 1.2};
  for (const Vec& dir : dirs) {
    const LineHits hits = domain_.line_hits(center, dir);
    const Vec xi = center + hits.t_plus * dir;
    for (double r : radii)
      samples.push_back(geodesic_point_affine(domain_, center, xi, r));
  }
  const double inside_tol = domain_.approximate() ? 1e-3 : kSpectralGapTol;
  const AffineChart& chart = domain_.chart();
  for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
    std::vector<Vec> images;
    for (const Vec& p : samples) {
      Vec q;
      try {
        q = chart.to_affine_raw(gens_[gi] * chart.lift(p));
      } catch (const ChartError&) {
        throw ArgumentError("GroupPresentation: generator " + labels_[gi] +
                            " maps a sample out of the chart");
      }
      if (domain_.defect(q) > inside_tol)
        throw ArgumentError("GroupPresentation: generator " + labels_[gi] +
                            " does not preserve the domain (sample escapes)");
      images.push_back(q);
    }
    if (!domain_.approximate()) {
      for (std::size_t k = 0; k + 1 < samples.size(); k += 2) {
        const double before =
            hilbert_distance_affine(domain_, samples[k], samples[k + 1]);
        const double after =
            hilbert_distance_affine(domain_, images[k], images[k + 1]);
        if (std::abs(before - after) > kSpectralGapTol)
          throw ArgumentError("GroupPresentation: generator " + labels_[gi] +
                              " distorts sampled distances");
      }
    }
  }
}

double GroupPresentation::max_generator_displacement(const Vec& o) const {
  const AffineChart& chart = domain_.chart();
  const Vec o_lift = chart.lift(o);
  double best = 0.0;
  for (const Mat& g : gens_) {
    const Vec img = chart.to_affine_raw(g * o_lift);
    best = std::max(best, hilbert_distance_affine(domain_, o, img));
  }
  return best;
}

const SpectralData& GroupElement::spectral(const ConvexDomain& domain) const {
  if (!spectral_cache_)
    spectral_cache_ =
        std::make_shared<const SpectralData>(classify(transform, domain));
  return *spectral_cache_;
}

void for_each_in_ball(const GroupPresentation& group, const Vec& o, double t,
                      const EnumerationOptions& options,
                      const std::function<void(const BallVisit&)>& visit,
                      const std::function<void(const BallVisit&)>& skeleton) {
  if (t < 0.0)
    throw ArgumentError("for_each_in_ball: radius must be nonnegative");
  const ConvexDomain& dom = group.domain();
  if (!dom.contains(o))
    throw ArgumentError("for_each_in_ball: basepoint must be interior");
  const int n = dom.dim() + 1;
  const int nn = n * n;
  const double margin = options.margin >= 0.0
                            ? options.margin
                            : 2.0 * group.max_generator_displacement(o);
  const double keep_bound = t + margin;
  const AffineChart& chart = dom.chart();
  const Vec o_lift = chart.lift(o);

  KeySet seen;
  const Mat ident = Mat::Identity(n, n);
  std::uint64_t k0, k1;
  canonical_keys(ident.data(), nn, &k0, &k1);
  seen.insert(k0);
  seen.insert(k1);
  visit(BallVisit{ident, 0.0, 0, 0, -1});
  std::size_t accepted = 1;
  if (options.cap == 0)
    throw ResourceError("for_each_in_ball: enumeration cap (0) exceeded");

  std::vector<double> cur(static_cast<std::size_t>(nn)), next;
  std::vector<std::uint64_t> cur_idx{0}, next_idx;
  Eigen::Map<Mat>(cur.data(), n, n) = ident;

  std::uint64_t discovered = 1;
  const std::uint64_t discover_guard =
      options.cap > (1u << 30) ? std::numeric_limits<std::uint64_t>::max()
                               : static_cast<std::uint64_t>(options.cap) * 4;
  Mat child(n, n);
  Vec img_h(n);
  while (!cur_idx.empty()) {
    next.clear();
    next_idx.clear();
    for (std::size_t e = 0; e < cur_idx.size(); ++e) {
      const Eigen::Map<const Mat> pm(cur.data() + e * nn, n, n);
      for (int gi = 0; gi < group.generator_count(); ++gi) {
        child.noalias() = pm * group.generator(gi);
        canonical_keys(child.data(), nn, &k0, &k1);
        if (seen.contains(k0) || seen.contains(k1)) continue;
        seen.insert(k0);
        seen.insert(k1);
        if (++discovered > discover_guard)
          throw ResourceError(
              "for_each_in_ball: expansion cap (4x enumeration cap) exceeded");
        img_h.noalias() = child * o_lift;
        double disp;
        try {
          disp = hilbert_distance_affine(dom, o, chart.to_affine_raw(img_h));
        } catch (const ChartError&) {
          continue;  // image escapes the chart: certainly outside the ball
        } catch (const GeometryError&) {
          continue;  // image reads as boundary at double precision: ditto
        }
        const std::uint64_t idx = discovered - 1;
        const bool inside = disp <= t + 1e-12;
        if (inside) {
          if (accepted == options.cap) {
            if (options.stop_at_cap) return;
            std::ostringstream os;
            os << "for_each_in_ball: enumeration cap (" << options.cap
               << ") exceeded at radius " << t;
            throw ResourceError(os.str());
          }
          visit(BallVisit{child, disp, idx, cur_idx[e], gi});
          ++accepted;
        } else if (skeleton && disp <= keep_bound) {
          skeleton(BallVisit{child, disp, idx, cur_idx[e], gi});
        }
        if (disp <= keep_bound) {
          const std::size_t base = next.size();
          next.resize(base + static_cast<std::size_t>(nn));
          Eigen::Map<Mat>(next.data() + base, n, n) = child;
          next_idx.push_back(idx);
        }
      }
    }
    cur.swap(next);
    cur_idx.swap(next_idx);
  }
}

namespace {

// Shared collector: materializes visits, reconstructing words from the
// parent chain when requested.
struct BallCollector {
  bool keep_words;
  std::vector<Mat> mats;
  std::vector<double> disps;
  std::vector<std::uint64_t> indices;
  std::vector<std::uint64_t> parent_of;  // indexed by BFS discovery index
  std::vector<std::int32_t> letter_of;

  void take(const BallVisit& v) {
    mats.push_back(v.matrix);
    disps.push_back(v.displacement);
    indices.push_back(v.index);
    if (keep_words) {
      if (parent_of.size() <= v.index) {
        parent_of.resize(v.index + 1);
        letter_of.resize(v.index + 1, -1);
      }
      parent_of[v.index] = v.parent;
      letter_of[v.index] = v.letter;
    }
  }

  void record_skeleton(const BallVisit& v) {
    // Pruned elements still enter the parent chain of later accepts.
    if (!keep_words) return;
    if (parent_of.size() <= v.index) {
      parent_of.resize(v.index + 1);
      letter_of.resize(v.index + 1, -1);
    }
    parent_of[v.index] = v.parent;
    letter_of[v.index] = v.letter;
  }

  std::vector<std::int32_t> word_of(std::uint64_t idx) const {
    std::vector<std::int32_t> w;
    while (idx != 0) {
      w.push_back(letter_of[idx]);
      idx = parent_of[idx];
    }
    std::reverse(w.begin(), w.end());
    return w;
  }
};

}  // namespace

std::vector<GroupElement> enumerate_metric_ball(
    const GroupPresentation& group, const Vec& o, double t,
    const EnumerationOptions& options) {
  BallCollector col;
  col.keep_words = options.keep_words;
  for_each_in_ball(group, o, t, options,
                   [&](const BallVisit& v) { col.take(v); },
                   [&](const BallVisit& v) { col.record_skeleton(v); });
  std::vector<GroupElement> out;
  out.reserve(col.mats.size());
  for (std::size_t i = 0; i < col.mats.size(); ++i) {
    GroupElement e{options.keep_words ? col.word_of(col.indices[i])
                                      : std::vector<std::int32_t>{},
                   ProjectiveTransform(col.mats[i]), col.disps[i]};
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(),
            [](const GroupElement& a, const GroupElement& b) {
              if (a.displacement != b.displacement)
                return a.displacement < b.displacement;
              if (a.word.size() != b.word.size())
                return a.word.size() < b.word.size();
              return a.word < b.word;
            });
  return out;
}

std::vector<GroupElement> enumerate_word_ball(const GroupPresentation& group,
                                              const Vec& o,
                                              std::size_t budget) {
  EnumerationOptions options;
  options.cap = budget;
  options.stop_at_cap = true;
  options.margin = 0.0;
  BallCollector col;
  col.keep_words = true;
  for_each_in_ball(group, o, std::numeric_limits<double>::infinity(), options,
                   [&](const BallVisit& v) { col.take(v); });
  std::vector<GroupElement> out;
  out.reserve(col.mats.size());
  for (std::size_t i = 0; i < col.mats.size(); ++i)
    out.push_back(GroupElement{col.word_of(col.indices[i]),
                               ProjectiveTransform(col.mats[i]),
                               col.disps[i]});
  return out;
}

std::vector<HomogeneousPoint> limit_set_sample(const GroupPresentation& group,
                                               std::size_t budget) {
  const auto elements =
      enumerate_word_ball(group, group.domain().center(), budget);
  std::vector<HomogeneousPoint> points;
  for (const auto& e : elements) {
    if (e.word.empty()) continue;
    if (translation_length(e.transform) <= 0.0) continue;
    try {
      const SpectralData& sd = e.spectral(group.domain());
      if (sd.type == IsometryClass::Hyperbolic && sd.attracting)
        points.push_back(*sd.attracting);
    } catch (const ArgumentError&) {
      // Borderline spectrum (gap barely above tolerance without clean
      // proximality): skip; such elements contribute nothing reliable.
      continue;
    }
  }
  if (points.empty())
    throw ArgumentError(
        "limit_set_sample: elementary group, no hyperbolic element among "
        "the first " +
        std::to_string(budget) + " elements");
  std::sort(points.begin(), points.end(),
            [](const HomogeneousPoint& a, const HomogeneousPoint& b) {
              const Vec& u = a.coords();
              const Vec& v = b.coords();
              for (int i = 0; i < u.size(); ++i) {
                if (u(i) != v(i)) return u(i) < v(i);
              }
              return false;
            });
  std::vector<HomogeneousPoint> dedup;
  for (const auto& p : points) {
    bool fresh = true;
    for (auto it = dedup.rbegin(); it != dedup.rend(); ++it) {
      if (p.coords()(0) - it->coords()(0) > kSpectralGapTol) break;
      if (p.approx_equal(*it, kSpectralGapTol)) {
        fresh = false;
        break;
      }
    }
    if (fresh) dedup.push_back(p);
  }
  return dedup;
}

}  // namespace hilbert
