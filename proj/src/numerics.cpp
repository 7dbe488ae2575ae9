#include "hilbert/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hilbert {

std::vector<double> solve_quadratic(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double sq = std::sqrt(disc);
  // q and b share a sign, so neither root subtracts like-signed terms.
  const double q = -0.5 * (b + std::copysign(sq, b));
  std::vector<double> roots;
  if (q == 0.0) {
    roots.push_back(0.0);
    roots.push_back(-b / a);
  } else {
    roots.push_back(q / a);
    roots.push_back(c / q);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo,
                     double hi, double tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw ArgumentError("newton_bisect: endpoints do not bracket a root");
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    if (hi - lo < tol) return 0.5 * (lo + hi);
    const double dfx = df(x);
    double next = (dfx != 0.0) ? x - fx / dfx : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if ((flo > 0.0) == (f(hi) > 0.0))
    throw ArgumentError("bisect: endpoints do not bracket a root");
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                     double lo, double hi, double tol) {
  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

namespace {

// Tableau rows 0..m-1 hold [B^-1 A | B^-1 b]; row m holds the reduced costs
// and the current objective value.  Bland's rule on both choices, so cycling
// cannot occur.  Returns false when the column is unbounded.
bool simplex_iterate(Mat& T, std::vector<int>& basis) {
  const double tol = 1e-11;
  // Bound the row loops by the basis vector so the indexing is visibly in
  // range (one basic variable per constraint row).
  const int m = static_cast<int>(basis.size());
  const int ncols = static_cast<int>(T.cols()) - 1;
  for (long iter = 0; iter < 500000; ++iter) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (T(m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > tol) {
        const double ratio = T(i, ncols) / T(i, enter);
        if (leave < 0 || ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0) return false;
    T.row(leave) /= T(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i != leave && T(i, enter) != 0.0)
        T.row(i) -= T(i, enter) * T.row(leave);
    }
    basis[leave] = enter;
  }
  throw NumericalError("simplex: iteration cap reached");
}

}  // namespace

std::optional<LinearProgramSolution> simplex_max(const Mat& A, const Vec& b,
                                                 const Vec& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());

  // Phase 1: minimize the sum of artificial slacks.
  Mat T(m + 1, n + m + 1);
  T.setZero();
  for (int i = 0; i < m; ++i) {
    const double s = (b(i) < 0.0) ? -1.0 : 1.0;
    T.row(i).head(n) = s * A.row(i);
    T(i, n + i) = 1.0;
    T(i, n + m) = s * b(i);
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  for (int j = 0; j < n; ++j) T(m, j) = -T.col(j).head(m).sum();
  T(m, n + m) = -T.col(n + m).head(m).sum();
  if (!simplex_iterate(T, basis))
    throw NumericalError("simplex: phase 1 unbounded");
  if (T(m, n + m) < -1e-8) return std::nullopt;

  // Drive leftover artificials out of the basis; rows that cannot pivot are
  // redundant constraints and get dropped.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) {
      int piv = -1;
      for (int j = 0; j < n; ++j) {
        if (std::abs(T(i, j)) > 1e-9) {
          piv = j;
          break;
        }
      }
      if (piv < 0) continue;
      T.row(i) /= T(i, piv);
      for (int r = 0; r <= m; ++r) {
        if (r != i && T(r, piv) != 0.0) T.row(r) -= T(r, piv) * T.row(i);
      }
      basis[i] = piv;
    }
    keep.push_back(i);
  }

  // Phase 2 tableau: real columns only, fresh reduced-cost row.
  const int m2 = static_cast<int>(keep.size());
  Mat T2(m2 + 1, n + 1);
  std::vector<int> basis2(m2);
  for (int i = 0; i < m2; ++i) {
    T2.row(i).head(n) = T.row(keep[i]).head(n);
    T2(i, n) = T(keep[i], n + m);
    basis2[i] = basis[keep[i]];
  }
  T2.row(m2).setZero();
  for (int j = 0; j < n; ++j) T2(m2, j) = -c(j);
  for (int i = 0; i < m2; ++i) T2.row(m2) += c(basis2[i]) * T2.row(i);
  if (!simplex_iterate(T2, basis2))
    throw NumericalError("simplex: objective unbounded");

  LinearProgramSolution sol;
  sol.v = Vec::Zero(n);
  for (int i = 0; i < m2; ++i) sol.v(basis2[i]) = T2(i, n);
  sol.objective = c.dot(sol.v);
  return sol;
}

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3)
    throw ArgumentError("fit_line: need >= 3 matched samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("fit_line: degenerate abscissae");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.slope_stderr =
      std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
  return fit;
}

TrendTest kendall_tau(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 4)
    throw ArgumentError("kendall_tau: need >= 4 matched samples");
  long s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[j] - x[i];
      const double dy = y[j] - y[i];
      const double prod = dx * dy;
      if (prod > 0.0)
        ++s;
      else if (prod < 0.0)
        --s;
      // Ties contribute zero; with tied pairs present tau is attenuated
      // toward zero, which is the conservative direction for a trend test.
    }
  }
  const double nn = static_cast<double>(n);
  TrendTest t;
  t.tau = static_cast<double>(s) / (0.5 * nn * (nn - 1.0));
  const double var_s = nn * (nn - 1.0) * (2.0 * nn + 5.0) / 18.0;
  t.z = static_cast<double>(s) / std::sqrt(var_s);
  return t;
}

namespace {
double pairwise_sum_range(const double* a, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum_range(a, h) + pairwise_sum_range(a + h, n - h);
}
}  // namespace

double pairwise_sum(const std::vector<double>& terms) {
  return pairwise_sum_range(terms.data(), terms.size());
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw ArgumentError("SplitMix64::below: empty range");
  const std::uint64_t lim =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t x = next();
    if (x < lim) return x % n;
  }
}

double SplitMix64::normal() {
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

SplitMix64 stream_rng(std::uint64_t seed, std::uint64_t stream_id) {
  SplitMix64 mixer(seed ^ (0xBF58476D1CE4E5B9ULL * (stream_id + 1)));
  return SplitMix64(mixer.next());
}

WeightedSampler::WeightedSampler(const std::vector<double>& weights) {
  cumulative_.reserve(weights.size());
  double run = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ArgumentError("WeightedSampler: negative weight");
    run += w;
    cumulative_.push_back(run);
  }
  if (cumulative_.empty() || run <= 0.0)
    throw ArgumentError("WeightedSampler: no positive weight");
}

std::size_t WeightedSampler::sample(SplitMix64& rng) const {
  const double u = rng.uniform01() * cumulative_.back();
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                               static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
}

double bootstrap_stderr(const std::vector<double>& samples, int n_boot,
                        SplitMix64& rng) {
  const std::size_t n = samples.size();
  if (n < 2 || n_boot < 2)
    throw ArgumentError("bootstrap_stderr: need >= 2 samples and resamples");
  std::vector<double> means(static_cast<std::size_t>(n_boot));
  for (int k = 0; k < n_boot; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += samples[rng.below(n)];
    means[static_cast<std::size_t>(k)] = s / static_cast<double>(n);
  }
  double m = 0.0;
  for (double v : means) m += v;
  m /= static_cast<double>(n_boot);
  double var = 0.0;
  for (double v : means) var += (v - m) * (v - m);
  return std::sqrt(var / (static_cast<double>(n_boot) - 1.0));
}

namespace {
double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}
}  // namespace

std::vector<Vec> sphere_mesh(int dim, int count) {
  if (dim < 2 || count < 1)
    throw ArgumentError("sphere_mesh: need dim >= 2 and count >= 1");
  const double pi = 3.14159265358979323846;
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * pi * (static_cast<double>(i) + 0.5) /
                       static_cast<double>(count);
      Vec v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
    return out;
  }
  if (dim == 3) {
    // Fibonacci spiral: near-uniform and fully deterministic.
    const double ga = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z =
          1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = ga * static_cast<double>(i);
      Vec v(3);
      v << r * std::cos(a), r * std::sin(a), z;
      out.push_back(v);
    }
    return out;
  }
  // Higher dimensions: Halton-driven Box-Muller normals, normalized.
  static const int bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  const int npairs = (dim + 1) / 2;
  if (npairs > 10) throw ArgumentError("sphere_mesh: dimension too large");
  for (int i = 0; i < count; ++i) {
    Vec v(dim);
    for (int p = 0; p < npairs; ++p) {
      const double u1 =
          1.0 - radical_inverse(static_cast<std::uint64_t>(i + 1), bases[2 * p]);
      const double u2 =
          radical_inverse(static_cast<std::uint64_t>(i + 1), bases[2 * p + 1]);
      const double rad = std::sqrt(-2.0 * std::log(u1));
      v(2 * p) = rad * std::cos(2.0 * pi * u2);
      if (2 * p + 1 < dim) v(2 * p + 1) = rad * std::sin(2.0 * pi * u2);
    }
    const double norm = v.norm();
    if (norm == 0.0) continue;
    out.push_back(v / norm);
  }
  return out;
}

namespace {

// Error-free transformations: exact product and sum residuals.
struct DD {
  double hi, lo;
};
inline DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}
inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bp = s - a;
  return {s, (a - (s - bp)) + (b - bp)};
}
inline DD dd_add(DD x, DD y) {
  DD s = two_sum(x.hi, y.hi);
  s.lo += x.lo + y.lo;
  DD r = two_sum(s.hi, s.lo);
  return r;
}
inline DD dd_neg(DD x) { return {-x.hi, -x.lo}; }
inline DD dd_mul_d(DD x, double c) {
  DD p = two_prod(x.hi, c);
  p.lo += x.lo * c;
  DD r = two_sum(p.hi, p.lo);
  return r;
}

// ad - bc with full relative accuracy (Kahan's determinant trick extended
// to keep the residual).
inline DD det2_dd(double a, double b, double c, double d) {
  const DD p = two_prod(a, d);
  const DD q = two_prod(b, c);
  return dd_add(p, dd_neg(q));
}

// Evaluate p(l) = l^3 - t l^2 + q l - 1 and its derivative.
inline double char_cubic(double t, double q, double l) {
  return ((l - t) * l + q) * l - 1.0;
}
inline double char_cubic_d(double t, double q, double l) {
  return (3.0 * l - 2.0 * t) * l + q;
}

// Two Newton polish steps; simple roots only.  The closed-form root carries
// the cancellation of the depressed-cubic shift, the polish removes it.
inline double polish_root(double t, double q, double l) {
  for (int k = 0; k < 3; ++k) {
    const double dp = char_cubic_d(t, q, l);
    if (dp == 0.0) break;
    l -= char_cubic(t, q, l) / dp;
  }
  return l;
}

}  // namespace

double det3_accurate(const Mat& m) {
  if (m.rows() != 3 || m.cols() != 3)
    throw ArgumentError("det3_accurate: matrix must be 3x3");
  const DD c0 = det2_dd(m(1, 1), m(1, 2), m(2, 1), m(2, 2));
  const DD c1 = det2_dd(m(1, 0), m(1, 2), m(2, 0), m(2, 2));
  const DD c2 = det2_dd(m(1, 0), m(1, 1), m(2, 0), m(2, 1));
  const DD r = dd_add(dd_add(dd_mul_d(c0, m(0, 0)), dd_neg(dd_mul_d(c1, m(0, 1)))),
                      dd_mul_d(c2, m(0, 2)));
  return r.hi + r.lo;
}

Spectrum3 spectrum_3x3(const Mat& m_in) {
  if (m_in.rows() != 3 || m_in.cols() != 3)
    throw ArgumentError("spectrum_3x3: matrix must be 3x3");
  Spectrum3 sp;

  // Unit-determinant representative.  The determinant is taken on the raw
  // entries (stored doubles are exact inputs) with compensated arithmetic,
  // so products of unit-determinant generators keep a trustworthy sign and
  // magnitude far below the eps*norm^3 floor of a plain expansion.  The
  // guard is relative: a genuine rank drop, not a large norm, should trip it.
  const double s0 = m_in.cwiseAbs().maxCoeff();
  if (!(s0 > 0.0)) throw ArgumentError("spectrum_3x3: zero matrix");
  const double det = det3_accurate(m_in);
  if (std::abs(det) < 1e-30 * s0 * s0 * s0)
    throw ArgumentError("spectrum_3x3: matrix is numerically singular");
  sp.scale = std::cbrt(std::abs(det));
  Mat m = m_in / sp.scale;
  sp.flipped = det < 0.0;
  if (sp.flipped) m = -m;  // det +1; same projective map
  sp.normalized = m;

  // Trace and adjugate trace; each principal minor through the compensated
  // 2x2 determinant, so internal cancellation costs nothing.
  sp.t = m.trace();
  const DD q01 = det2_dd(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
  const DD q02 = det2_dd(m(0, 0), m(0, 2), m(2, 0), m(2, 2));
  const DD q12 = det2_dd(m(1, 1), m(1, 2), m(2, 1), m(2, 2));
  const DD qdd = dd_add(dd_add(q01, q02), q12);
  sp.q = qdd.hi + qdd.lo;
  const double t = sp.t, q = sp.q;

  // Discriminant of l^3 - t l^2 + q l - 1 with a first-order error bound:
  // coefficient noise from the entry products plus the rounding of the
  // polynomial evaluation itself.  Near the triple root both gradients
  // vanish, so a quadratic term keeps the bound honest there.
  const double eps = std::numeric_limits<double>::epsilon();
  const double c1 = m.cwiseAbs().maxCoeff();
  const double err_t = 12.0 * eps * c1;
  const double err_q = 24.0 * eps * c1 * c1;
  sp.disc = 18.0 * t * q - 4.0 * t * t * t + t * t * q * q -
            4.0 * q * q * q - 27.0;
  const double ddt = 18.0 * q - 12.0 * t * t + 2.0 * t * q * q;
  const double ddq = 18.0 * t + 2.0 * t * t * q - 12.0 * q * q;
  const double eval_mag = std::abs(18.0 * t * q) + 4.0 * std::abs(t * t * t) +
                          t * t * q * q + 4.0 * std::abs(q * q * q) + 27.0;
  sp.disc_tol = std::abs(ddt) * err_t + std::abs(ddq) * err_q +
                16.0 * eps * eval_mag +
                54.0 * (err_t + err_q) * (err_t + err_q);
  sp.degenerate = std::abs(sp.disc) <= sp.disc_tol;

  if (sp.degenerate) {
    // Repeated root: it is also a root of p', and the quadratic is well
    // conditioned there.  The simple root follows from the product rule
    // d^2 * s = 1.
    const double rad = std::sqrt(std::max(0.0, t * t - 3.0 * q));
    const double u1 = (t + rad) / 3.0;
    const double u2 = (t - rad) / 3.0;
    const double d = std::abs(char_cubic(t, q, u1)) <=
                             std::abs(char_cubic(t, q, u2))
                         ? u1
                         : u2;
    sp.roots = {d, d, d * d != 0.0 ? 1.0 / (d * d) : 0.0};
    sp.real_count = 3;
    return sp;
  }

  // Depressed cubic y^3 + P y + Q with l = y + t/3.
  const double P = q - t * t / 3.0;
  const double Q = -2.0 * t * t * t / 27.0 + t * q / 3.0 - 1.0;
  if (sp.disc > 0.0) {
    // Three distinct real roots by the trig formula, then polished.
    const double rho = 2.0 * std::sqrt(std::max(1e-300, -P / 3.0));
    double cosarg = 3.0 * Q / (P * rho);
    cosarg = std::max(-1.0, std::min(1.0, cosarg));
    const double theta = std::acos(cosarg);
    const double pi = 3.14159265358979323846;
    for (int k = 0; k < 3; ++k)
      sp.roots[static_cast<std::size_t>(k)] = polish_root(
          t, q,
          rho * std::cos((theta - 2.0 * pi * static_cast<double>(k)) / 3.0) +
              t / 3.0);
    std::sort(sp.roots.begin(), sp.roots.end(), std::greater<double>());
    sp.real_count = 3;
  } else {
    // One real root (positive: r |z|^2 = det = 1) by the stable Cardano
    // form, then polished; the pair modulus follows from the determinant.
    const double sq = std::sqrt(0.25 * Q * Q + P * P * P / 27.0);
    const double w = -0.5 * Q - std::copysign(sq, Q);
    const double u = std::cbrt(w);
    const double y = (u != 0.0) ? u - P / (3.0 * u) : 0.0;
    const double r = polish_root(t, q, y + t / 3.0);
    sp.roots = {r, r > 0.0 ? std::sqrt(1.0 / r) : 0.0,
                r > 0.0 ? std::sqrt(1.0 / r) : 0.0};
    sp.real_count = 1;
  }
  return sp;
}

std::array<double, 3> eig_moduli_3x3(const Mat& m) {
  const Spectrum3 sp = spectrum_3x3(m);
  std::array<double, 3> out{std::abs(sp.roots[0]), std::abs(sp.roots[1]),
                            std::abs(sp.roots[2])};
  std::sort(out.begin(), out.end(), std::greater<double>());
  for (double& v : out) v *= sp.scale;
  return out;
}

}  // namespace hilbert
