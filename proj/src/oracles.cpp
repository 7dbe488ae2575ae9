#include "hilbert/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "hilbert/classify.hpp"
#include "hilbert/metric.hpp"

namespace hilbert {

double klein_distance(const Vec& x, const Vec& y) {
  const double xx = x.squaredNorm();
  const double yy = y.squaredNorm();
  if (xx >= 1.0 || yy >= 1.0)
    throw ArgumentError("klein_distance needs points inside the unit ball");
  const double num = 1.0 - x.dot(y);
  return std::acosh(num / std::sqrt((1.0 - xx) * (1.0 - yy)));
}

double klein_busemann(const Vec& xi, const Vec& x, const Vec& y) {
  const double xx = x.squaredNorm();
  const double yy = y.squaredNorm();
  if (xx >= 1.0 || yy >= 1.0)
    throw ArgumentError("klein_busemann needs interior points");
  // log of the Poisson-kernel ratio; positive when x sits farther from xi.
  const double fx = (1.0 - x.dot(xi)) / std::sqrt(1.0 - xx);
  const double fy = (1.0 - y.dot(xi)) / std::sqrt(1.0 - yy);
  return std::log(fx) - std::log(fy);
}

double klein_gromov(const Vec& xi, const Vec& eta) {
  const double ip = xi.dot(eta);
  if (ip >= 1.0 - 1e-15)
    throw ArgumentError("klein_gromov needs distinct boundary points");
  return -0.5 * std::log((1.0 - ip) / 2.0);
}

double busemann_direct(const ConvexDomain& domain, const HomogeneousPoint& xi,
                       const Vec& x, const Vec& y, double T) {
  if (!(T > 0.0)) throw ArgumentError("busemann_direct needs T > 0");
  const Vec xi_aff = domain.chart().to_affine(xi);
  const Vec z = geodesic_point_affine(domain, x, xi_aff, T);
  return hilbert_distance_affine(domain, x, z) -
         hilbert_distance_affine(domain, y, z);
}

Mat reference_form(const Mat& m_in) {
  const double scale = m_in.norm();
  if (!(scale > 0.0))
    throw ArgumentError("reference_form: zero matrix");
  Mat m = m_in / scale;
  for (int i = 0; i < m.size(); ++i) {
    const double c = m.data()[i];
    if (std::abs(c) > 1e-3) {
      if (c < 0.0) m = -m;
      break;
    }
  }
  return m;
}

namespace {

bool same_element(const Mat& a, const Mat& b) {
  return (a - b).lpNorm<Eigen::Infinity>() <= 1e-8 * a.norm();
}

}  // namespace

BruteOrbit brute_force_ball(const GroupPresentation& group, const Vec& o,
                            double t, int max_len) {
  if (max_len < 0 || max_len > 12)
    throw ArgumentError("brute_force_ball supports word lengths 0..12");
  const ConvexDomain& dom = group.domain();
  const AffineChart& chart = dom.chart();
  if (!dom.contains(o))
    throw ArgumentError("brute_force_ball basepoint must be interior");
  const Vec olift = chart.lift(o);
  const int k = group.generator_count();

  std::vector<Mat> seen;  // every distinct element of any length so far
  std::vector<Mat> frontier;
  std::vector<int> last_letter;
  const int n = group.generator(0).rows();
  seen.push_back(reference_form(Mat::Identity(n, n)));
  frontier.push_back(Mat::Identity(n, n));
  last_letter.push_back(-1);

  BruteOrbit out;
  out.elements.push_back(seen.front());
  out.displacement.push_back(0.0);

  for (int len = 1; len <= max_len; ++len) {
    std::vector<Mat> next;
    std::vector<int> next_letter;
    for (std::size_t f = 0; f < frontier.size(); ++f) {
      for (int g = 0; g < k; ++g) {
        if (last_letter[f] >= 0 && group.inverse_index(last_letter[f]) == g)
          continue;  // immediate cancellation reproduces a shorter word
        const Mat child = frontier[f] * group.generator(g);
        const Mat canon = reference_form(child);
        bool dup = false;
        for (const Mat& s : seen) {
          if (same_element(s, canon)) {
            dup = true;
            break;
          }
        }
        if (dup) continue;
        seen.push_back(canon);
        next.push_back(child);
        next_letter.push_back(g);
        double disp;
        try {
          disp = hilbert_distance_affine(dom, o,
                                         chart.to_affine_raw(child * olift));
        } catch (const ChartError&) {
          continue;
        } catch (const GeometryError&) {
          continue;
        }
        if (disp <= t + 1e-12) {
          out.elements.push_back(canon);
          out.displacement.push_back(disp);
        }
      }
    }
    frontier = std::move(next);
    last_letter = std::move(next_letter);
  }
  return out;
}

std::vector<CyclicClass> cyclic_word_census(const GroupPresentation& group,
                                            double l_max, int max_len) {
  if (!group.flags().assume_free)
    throw ArgumentError(
        "cyclic_word_census is only meaningful for presentations flagged "
        "free");
  if (max_len < 1 || max_len > 16)
    throw ArgumentError("cyclic_word_census supports word lengths 1..16");
  const int k = group.generator_count();
  std::vector<CyclicClass> out;

  std::vector<std::int32_t> w;
  for (int len = 1; len <= max_len; ++len) {
    w.assign(len, 0);
    while (true) {
      // Cyclic reducedness: no adjacent cancellation, wraparound included.
      bool reduced = true;
      for (int i = 0; i < len && reduced; ++i) {
        const int next = w[(i + 1) % len];
        // Adjacent cancellation needs two positions, so one-letter words are
        // always cyclically reduced.
        if (len > 1 && group.inverse_index(w[i]) == next) reduced = false;
      }
      if (reduced) {
        // One representative per rotation orbit: keep lex-min rotations.
        bool minimal = true;
        for (int r = 1; r < len && minimal; ++r) {
          for (int i = 0; i < len; ++i) {
            const int a = w[(i + r) % len];
            if (a < w[i]) {
              minimal = false;
              break;
            }
            if (a > w[i]) break;
          }
        }
        bool primitive = true;
        if (minimal) {
          for (int p = 1; p < len && primitive; ++p) {
            if (len % p != 0) continue;
            bool periodic = true;
            for (int i = 0; i < len; ++i)
              if (w[i] != w[i % p]) {
                periodic = false;
                break;
              }
            if (periodic) primitive = false;
          }
        }
        if (minimal && primitive) {
          Mat prod = group.generator(w[0]);
          for (int i = 1; i < len; ++i) prod = prod * group.generator(w[i]);
          // Unit-determinant words satisfy l >= (3/4) log(|tr|/3): the
          // subdominant pair of eigenvalues multiplies to 1/lambda_max, so
          // lambda_max/lambda_min >= lambda_max^(3/2).  Words far past the
          // cutoff are discarded on this bound alone; rounding during the
          // product has already cost such matrices their determinant, so
          // normalizing them is hopeless and pointless.
          const double tr_floor =
              0.75 * std::log(std::max(1.0, std::abs(prod.trace()) / 3.0));
          if (tr_floor <= l_max + 1.0) {
            const double len_t =
                translation_length(ProjectiveTransform(prod));
            if (len_t > 1e-6 && len_t <= l_max + 1e-9)
              out.push_back({w, len_t});
          }
        }
      }
      // odometer step
      int pos = len - 1;
      while (pos >= 0 && w[pos] == k - 1) {
        w[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++w[pos];
    }
  }
  std::sort(out.begin(), out.end(), [](const CyclicClass& a,
                                       const CyclicClass& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.word < b.word;
  });
  return out;
}

}  // namespace hilbert
