#include "hilbert/geodesics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <unordered_map>

#include "hilbert/metric.hpp"
#include "hilbert/numerics.hpp"

namespace hilbert {

namespace {

// Sampled Dirichlet-diameter estimate: greedily pull 64 deterministic
// interior samples toward o using generators only and take the largest
// residual distance.
double greedy_diameter_estimate(const GroupPresentation& group, const Vec& o,
                                double clamp_hi) {
  const ConvexDomain& dom = group.domain();
  const AffineChart& chart = dom.chart();
  const auto dirs = sphere_mesh(dom.dim(), 16);
  const double radii[] = {0.75, 1.5, 2.25, 3.0};
  double diam = 0.0;
  for (const Vec& dir : dirs) {
    const LineHits hits = dom.line_hits(o, dir);
    const Vec xi = o + hits.t_plus * dir;
    for (double r : radii) {
      Vec x = geodesic_point_affine(dom, o, xi, r);
      double cur = hilbert_distance_affine(dom, o, x);
      for (int it = 0; it < 1000; ++it) {
        double best = cur;
        Vec best_x = x;
        for (int gi = 0; gi < group.generator_count(); ++gi) {
          Vec y;
          try {
            y = chart.to_affine_raw(group.generator(gi) * chart.lift(x));
          } catch (const ChartError&) {
            continue;
          }
          double d;
          try {
            d = hilbert_distance_affine(dom, o, y);
          } catch (const GeometryError&) {
            continue;
          }
          if (d < best) {
            best = d;
            best_x = y;
          }
        }
        if (best >= cur - 1e-12) break;
        cur = best;
        x = best_x;
      }
      diam = std::max(diam, cur);
    }
  }
  return std::min(std::max(diam, 0.3), clamp_hi);
}

std::vector<std::int32_t> concat_words(const std::vector<std::int32_t>& a,
                                       const std::vector<std::int32_t>& b) {
  std::vector<std::int32_t> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i)
      parent[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

struct Candidate {
  Mat m;
  double disp;
  std::uint64_t bfs_index;
  double length;
};

// Real principal m-th root of a diagonalizable matrix; empty when the root
// is not numerically real or fails to reproduce the original.
std::optional<Mat> principal_root(const Mat& m_in, int m) {
  Eigen::EigenSolver<Mat> es(m_in);
  if (es.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXcd v = es.eigenvectors();
  Eigen::VectorXcd lam = es.eigenvalues();
  for (int i = 0; i < lam.size(); ++i)
    lam(i) = std::pow(lam(i), 1.0 / static_cast<double>(m));
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(v);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::MatrixXcd rc = v * lam.asDiagonal() * lu.inverse();
  if (rc.imag().lpNorm<Eigen::Infinity>() >
      1e-7 * (1.0 + rc.real().lpNorm<Eigen::Infinity>()))
    return std::nullopt;
  Mat r = rc.real();
  Mat check = r;
  for (int k = 1; k < m; ++k) check = check * r;
  if ((check - m_in).lpNorm<Eigen::Infinity>() >
      1e-7 * (1.0 + m_in.lpNorm<Eigen::Infinity>()))
    return std::nullopt;
  return r;
}

std::vector<ClosedGeodesic> finalize_census(
    const ConvexDomain& dom, std::vector<ClosedGeodesic> out) {
  std::sort(out.begin(), out.end(),
            [](const ClosedGeodesic& a, const ClosedGeodesic& b) {
              if (a.length != b.length) return a.length < b.length;
              const auto& wa = a.representative.word;
              const auto& wb = b.representative.word;
              if (wa.size() != wb.size()) return wa.size() < wb.size();
              if (wa != wb) return wa < wb;
              return a.representative.displacement <
                     b.representative.displacement;
            });
  (void)dom;
  return out;
}

// Conjugacy census over an enumerated metric ball.  Classes are merged by
// single-generator conjugation (hash lookups into the candidate set), then
// ambiguous equal-length components are swept against a conjugator ball.
// Primitivity is certified by looking up the principal m-th root of each
// class representative among the candidates.
std::vector<ClosedGeodesic> census_axis(const GroupPresentation& group,
                                        double max_length,
                                        const GeodesicEnumOptions& options) {
  const ConvexDomain& dom = group.domain();
  const Vec o = dom.center();
  const int n = dom.dim() + 1;
  // The clamp keeps the enumeration radius sane when the sampled estimate
  // blows up (infinite-volume quotients); axes of short classes still pass
  // near the basepoint in all shipped examples, and the exact free-word
  // path cross-checks the census where one exists.
  const double dhat = greedy_diameter_estimate(group, o, 2.0);
  const double r_enum = max_length + 2.0 * dhat + 0.5;
  const double conj_bound = 2.0 * dhat + 0.5 * max_length + 1.0;

  EnumerationOptions eopt;
  eopt.cap = options.cap;
  // A unit margin (rather than the conservative ball default) keeps the
  // frontier an order of magnitude smaller at census radii; class-level
  // redundancy makes the census far more forgiving than element-level
  // enumeration, and the free-word cross-check validates the choice.
  eopt.margin = options.margin >= 0.0 ? options.margin : 1.0;
  eopt.keep_words = options.keep_words;

  std::vector<Candidate> cands;
  std::vector<double> conj_disp;
  std::vector<Mat> conj_mats;
  std::vector<std::uint64_t> parent_of;
  std::vector<std::int32_t> letter_of;

  const auto record_parent = [&](const BallVisit& v) {
    if (!options.keep_words) return;
    if (parent_of.size() <= v.index) {
      parent_of.resize(v.index + 1, 0);
      letter_of.resize(v.index + 1, -1);
    }
    parent_of[v.index] = v.parent;
    letter_of[v.index] = v.letter;
  };
  const auto on_visit = [&](const BallVisit& v) {
    record_parent(v);
    if (v.displacement <= conj_bound) {
      conj_disp.push_back(v.displacement);
      conj_mats.push_back(v.matrix);
    }
    if (n == 3) {
      if (!detail::maybe_hyperbolic_3x3(v.matrix, 1e-7)) return;
      const auto mods = eig_moduli_3x3(v.matrix);
      const double len = 0.5 * std::log(mods[0] / mods[2]);
      if (len > 1e-6 && len <= max_length + 1e-6)
        cands.push_back({v.matrix, v.displacement, v.index, len});
    } else {
      const double len = translation_length(ProjectiveTransform(v.matrix));
      if (len > 1e-6 && len <= max_length + 1e-6)
        cands.push_back({v.matrix, v.displacement, v.index, len});
    }
  };
  for_each_in_ball(group, o, r_enum, eopt, on_visit, record_parent);

  // Exact classification pass over the prefiltered candidates.
  {
    std::vector<Candidate> kept;
    kept.reserve(cands.size());
    for (auto& c : cands) {
      try {
        const SpectralData sd = classify(ProjectiveTransform(c.m), dom);
        if (sd.type != IsometryClass::Hyperbolic) continue;
        if (sd.translation_length <= 1e-6 ||
            sd.translation_length > max_length + 1e-9)
          continue;
        c.length = sd.translation_length;
        kept.push_back(std::move(c));
      } catch (const ArgumentError&) {
        continue;  // borderline spectrum, cannot be a clean short class
      }
    }
    cands.swap(kept);
  }
  if (cands.empty()) return {};

  std::unordered_map<std::uint64_t, std::uint32_t> key_to_cand;
  key_to_cand.reserve(cands.size() * 3);
  for (std::uint32_t i = 0; i < cands.size(); ++i) {
    std::uint64_t k0, k1;
    detail::canonical_matrix_keys(cands[i].m, &k0, &k1);
    key_to_cand.emplace(k0, i);
    key_to_cand.emplace(k1, i);
  }
  const auto lookup = [&](const Mat& m) -> std::optional<std::uint32_t> {
    std::uint64_t k0, k1;
    detail::canonical_matrix_keys(m, &k0, &k1);
    auto it = key_to_cand.find(k0);
    if (it == key_to_cand.end()) it = key_to_cand.find(k1);
    if (it == key_to_cand.end()) return std::nullopt;
    return it->second;
  };

  // Stage 1: conjugation by single generators connects almost every pair of
  // same-class candidates inside the ball.
  UnionFind uf(cands.size());
  for (std::uint32_t i = 0; i < cands.size(); ++i) {
    for (int s = 0; s < group.generator_count(); ++s) {
      const Mat& gs = group.generator(s);
      const Mat& gsi = group.generator(group.inverse_index(s));
      const Mat conj = gs * cands[i].m * gsi;
      if (auto j = lookup(conj)) uf.unite(i, *j);
    }
  }

  const auto component_reps = [&]() {
    std::unordered_map<std::uint32_t, std::uint32_t> rep;
    for (std::uint32_t i = 0; i < cands.size(); ++i) {
      const std::uint32_t r = uf.find(i);
      auto it = rep.find(r);
      if (it == rep.end()) {
        rep.emplace(r, i);
      } else {
        const Candidate& a = cands[i];
        const Candidate& b = cands[it->second];
        if (a.disp < b.disp ||
            (a.disp == b.disp && a.bfs_index < b.bfs_index))
          it->second = i;
      }
    }
    std::vector<std::uint32_t> out;
    out.reserve(rep.size());
    for (const auto& kv : rep) out.push_back(kv.second);
    return out;
  };

  // Stage 2: components of (nearly) equal length are either genuinely
  // distinct classes (e.g. a class and its inverse) or chains stage 1 failed
  // to connect; sweep a conjugator ball to settle them.
  {
    std::vector<std::uint32_t> reps = component_reps();
    std::sort(reps.begin(), reps.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                return cands[a].length < cands[b].length;
              });
    std::vector<std::size_t> order(conj_mats.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return conj_disp[a] < conj_disp[b];
    });
    std::size_t lo = 0;
    while (lo < reps.size()) {
      std::size_t hi = lo + 1;
      const double base = cands[reps[lo]].length;
      while (hi < reps.size() &&
             cands[reps[hi]].length - cands[reps[hi - 1]].length <=
                 1e-7 * (1.0 + base))
        ++hi;
      if (hi - lo > 1) {
        const double cutoff =
            2.0 * dhat + 0.5 * cands[reps[hi - 1]].length + 1.0;
        for (std::size_t ci = lo; ci < hi; ++ci) {
          const Mat& m = cands[reps[ci]].m;
          for (std::size_t oi : order) {
            if (conj_disp[oi] > cutoff) break;
            const Mat& k = conj_mats[oi];
            const Mat conj = k * m * k.inverse();
            if (auto j = lookup(conj)) uf.unite(reps[ci], *j);
          }
        }
      }
      lo = hi;
    }
  }

  // Primitivity: a class representative gamma is a proper power exactly when
  // its principal m-th root is itself an enumerated candidate.
  std::vector<std::uint32_t> reps = component_reps();
  double min_len = std::numeric_limits<double>::infinity();
  for (std::uint32_t r : reps) min_len = std::min(min_len, cands[r].length);

  std::vector<ClosedGeodesic> out;
  for (std::uint32_t r : reps) {
    const Candidate& c = cands[r];
    bool primitive = true;
    for (int m = 2; m <= 64; ++m) {
      if (c.length / m < min_len - 1e-6) break;
      const auto root = principal_root(det_normalize(c.m), m);
      if (!root) continue;
      if (lookup(*root)) {
        primitive = false;
        break;
      }
    }
    if (!primitive) continue;
    const ProjectiveTransform t(c.m);
    SpectralData sd;
    try {
      sd = classify(t, dom);
    } catch (const ArgumentError&) {
      continue;
    }
    if (sd.type != IsometryClass::Hyperbolic || !sd.attracting ||
        !sd.repelling)
      continue;
    std::vector<std::int32_t> word;
    if (options.keep_words) {
      std::uint64_t idx = c.bfs_index;
      while (idx != 0) {
        word.push_back(letter_of[idx]);
        idx = parent_of[idx];
      }
      std::reverse(word.begin(), word.end());
    }
    out.push_back(ClosedGeodesic{GroupElement{std::move(word), t, c.disp},
                                 sd.translation_length, *sd.repelling,
                                 *sd.attracting, true});
  }
  return finalize_census(dom, std::move(out));
}

// Exact census for presentations flagged free: conjugacy classes are in
// bijection with cyclic equivalence classes of cyclically reduced words, and
// primitivity is an exact string-period check.
std::vector<ClosedGeodesic> census_free(const GroupPresentation& group,
                                        double max_length,
                                        const GeodesicEnumOptions& options) {
  (void)options;
  const ConvexDomain& dom = group.domain();
  const Vec o = dom.center();
  const AffineChart& chart = dom.chart();
  const Vec o_lift = chart.lift(o);
  const int gc = group.generator_count();
  std::vector<ClosedGeodesic> out;

  std::vector<std::int32_t> w;
  for (int len = 1;; ++len) {
    if (len > 64)
      throw ResourceError(
          "enumerate_primitive_geodesics: free-word census exceeded word "
          "length 64");
    double shortest = std::numeric_limits<double>::infinity();
    bool any = false;
    w.assign(static_cast<std::size_t>(len), 0);
    // Depth-first odometer over cyclically reduced words.
    std::function<void(int)> rec = [&](int pos) {
      if (pos == len) {
        if (group.inverse_index(w[static_cast<std::size_t>(len - 1)]) == w[0])
          return;
        // Keep lexicographically minimal rotations only.
        for (int rot = 1; rot < len; ++rot) {
          for (int i = 0; i < len; ++i) {
            const std::int32_t a = w[static_cast<std::size_t>((i + rot) % len)];
            const std::int32_t b = w[static_cast<std::size_t>(i)];
            if (a != b) {
              if (a < b) return;
              break;
            }
          }
        }
        any = true;
        Mat prod = group.generator(w[0]);
        for (int i = 1; i < len; ++i)
          prod = prod * group.generator(w[static_cast<std::size_t>(i)]);
        // Trace floor for unit-determinant words: l >= (3/4) log(|tr|/3).
        // Words far past the cutoff are certainly too long, and their stored
        // determinant may already be rounding noise, so skip them before
        // normalizing.  The floor still feeds the termination rule.
        const double tr_floor =
            0.75 * std::log(std::max(1.0, std::abs(prod.trace()) / 3.0));
        if (tr_floor > max_length + 1.0) {
          shortest = std::min(shortest, tr_floor);
          return;
        }
        const ProjectiveTransform t(prod);
        const double ell = translation_length(t);
        if (ell > 1e-9) shortest = std::min(shortest, ell);
        bool primitive = true;
        for (int d = 1; d < len && primitive; ++d) {
          if (len % d != 0) continue;
          bool periodic = true;
          for (int i = 0; i < len && periodic; ++i)
            periodic = w[static_cast<std::size_t>(i)] ==
                       w[static_cast<std::size_t>((i + d) % len)];
          if (periodic) primitive = false;
        }
        if (!primitive || ell <= 1e-9 || ell > max_length + 1e-9) return;
        SpectralData sd;
        try {
          sd = classify(t, dom);
        } catch (const ArgumentError&) {
          return;
        }
        if (sd.type != IsometryClass::Hyperbolic || !sd.attracting ||
            !sd.repelling)
          return;
        const double disp = hilbert_distance_affine(
            dom, o, chart.to_affine_raw(prod * o_lift));
        out.push_back(ClosedGeodesic{GroupElement{w, t, disp},
                                     sd.translation_length, *sd.repelling,
                                     *sd.attracting, true});
        return;
      }
      for (std::int32_t g = 0; g < gc; ++g) {
        if (pos > 0 &&
            group.inverse_index(w[static_cast<std::size_t>(pos - 1)]) == g)
          continue;
        w[static_cast<std::size_t>(pos)] = g;
        rec(pos + 1);
      }
    };
    rec(0);
    // Translation length grows linearly in cyclically reduced word length
    // for convex-cocompact free actions, so once the shortest class of a
    // given length overshoots, longer words cannot come back.
    if (!any || shortest > max_length) break;
  }
  return finalize_census(dom, std::move(out));
}

}  // namespace

std::vector<ClosedGeodesic> enumerate_primitive_geodesics(
    const GroupPresentation& group, double max_length,
    const GeodesicEnumOptions& options) {
  if (!(max_length > 0.0))
    throw ArgumentError(
        "enumerate_primitive_geodesics: max_length must be positive");
  CensusPath path = options.path;
  if (path == CensusPath::Auto)
    path = group.flags().assume_free ? CensusPath::FreeWords
                                     : CensusPath::Axis;
  if (path == CensusPath::FreeWords && !group.flags().assume_free)
    throw ArgumentError(
        "enumerate_primitive_geodesics: free-word census requires a "
        "presentation flagged assume_free");
  return path == CensusPath::FreeWords
             ? census_free(group, max_length, options)
             : census_axis(group, max_length, options);
}

DirichletReducer::DirichletReducer(const GroupPresentation& group, Vec o)
    : group_(&group), o_(std::move(o)) {
  const ConvexDomain& dom = group.domain();
  if (!dom.contains(o_))
    throw ArgumentError("DirichletReducer: basepoint must be interior");
  diameter_ = greedy_diameter_estimate(group, o_, 5.0);
  EnumerationOptions eopt;
  eopt.cap = 2'000'000;
  const AffineChart& chart = dom.chart();
  const Vec o_lift = chart.lift(o_);
  for (int i = 0; i < group.generator_count(); ++i) {
    const Vec img = chart.to_affine_raw(group.generator(i) * o_lift);
    set_.push_back(GroupElement{{i},
                                ProjectiveTransform(group.generator(i)),
                                hilbert_distance_affine(dom, o_, img)});
  }
  for (auto& e : enumerate_metric_ball(group, o_, 2.0 * diameter_, eopt))
    if (!e.word.empty()) set_.push_back(std::move(e));
}

std::pair<Vec, GroupElement> DirichletReducer::reduce(const Vec& x) const {
  const ConvexDomain& dom = group_->domain();
  const AffineChart& chart = dom.chart();
  if (!dom.contains(x))
    throw ArgumentError("DirichletReducer::reduce: point must be interior");
  Vec cur = x;
  double cur_d = hilbert_distance_affine(dom, o_, cur);
  const int n = dom.dim() + 1;
  Mat acc = Mat::Identity(n, n);
  std::vector<std::int32_t> word;
  bool moved = false;
  for (int iter = 0;; ++iter) {
    if (iter >= 10000)
      throw ResourceError(
          "DirichletReducer::reduce: still descending after 10000 steps "
          "(likely cusp excursion; enlarge the reduction set)");
    double best_d = cur_d - 1e-12;
    const GroupElement* best = nullptr;
    Vec best_x;
    for (const auto& s : set_) {
      Vec y;
      try {
        y = s.transform.apply_affine(chart, cur);
      } catch (const ChartError&) {
        continue;
      }
      double d;
      try {
        d = hilbert_distance_affine(dom, o_, y);
      } catch (const GeometryError&) {
        continue;
      }
      if (d < best_d) {
        best_d = d;
        best = &s;
        best_x = y;
      }
    }
    if (best == nullptr) break;
    cur = best_x;
    cur_d = best_d;
    acc = best->transform.matrix() * acc;
    word = concat_words(best->word, word);
    moved = true;
  }
  if (!moved)
    return {cur, GroupElement{{}, ProjectiveTransform::identity(n), 0.0}};
  const ProjectiveTransform t(acc);
  const double disp =
      hilbert_distance_affine(dom, o_, t.apply_affine(chart, o_));
  return {cur, GroupElement{std::move(word), t, disp}};
}

std::pair<Vec, GroupElement> dirichlet_reduce(const GroupPresentation& group,
                                              const Vec& o, const Vec& x) {
  return DirichletReducer(group, o).reduce(x);
}

}  // namespace hilbert
