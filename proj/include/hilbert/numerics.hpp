#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hilbert/types.hpp"

namespace hilbert {

// Real roots of a*t^2 + b*t + c = 0, computed with the sign-safe variant of
// the quadratic formula (no subtraction of like-signed quantities).  Returns
// roots sorted ascending; empty if the discriminant is negative or a == 0
// degenerates to a non-bracketing linear equation.
std::vector<double> solve_quadratic(double a, double b, double c);

// Root of a monotone-bracketed function: Newton steps taken from the current
// iterate, falling back to bisection whenever the step leaves [lo, hi] or
// fails to shrink the bracket.  f must satisfy sign(f(lo)) != sign(f(hi)).
double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo,
                     double hi, double tol = 1e-14, int max_iter = 200);

// Bisection-only variant for when no derivative is available.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-14, int max_iter = 400);

// Minimum of a unimodal function on [lo, hi] by golden-section search.
// Returns (argmin, min value).
std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                     double lo, double hi, double tol = 1e-10);

// Dense two-phase simplex for  max c.v  s.t.  A v = b, v >= 0.
// Bland's rule, so it terminates on degenerate tableaus.  Returns nullopt if
// infeasible; throws NumericalError if unbounded.  Scale: hundreds of
// variables, dozens of rows.
struct LinearProgramSolution {
  double objective;
  Vec v;
};
std::optional<LinearProgramSolution> simplex_max(const Mat& A, const Vec& b,
                                                 const Vec& c);

// Ordinary least squares fit y = slope*x + intercept with the standard error
// of the slope under iid residuals.
struct SlopeFit {
  double slope;
  double intercept;
  double slope_stderr;
};
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Kendall rank correlation of (x_i, y_i) and the normal z-score of tau under
// the null of no association.  Used as a trend detector.
struct TrendTest {
  double tau;
  double z;
};
TrendTest kendall_tau(const std::vector<double>& x,
                      const std::vector<double>& y);

// Pairwise (cascade) summation; error grows like log n instead of n.
double pairwise_sum(const std::vector<double>& terms);

// Deterministic uniform doubles in [0,1) from a 64-bit generator state.
// Avoids std::uniform_real_distribution, which is implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform01();                       // 53-bit mantissa in [0,1)
  std::uint64_t below(std::uint64_t n);     // unbiased integer in [0,n)
  double normal();                          // Box-Muller, consumes two draws

 private:
  std::uint64_t state_;
};

// Derives an independent stream from (seed, stream_id); used so experiments
// can split one seed across phases without correlation.
SplitMix64 stream_rng(std::uint64_t seed, std::uint64_t stream_id);

// Index i sampled proportionally to weights[i] via inverse CDF on the running
// pairwise-summed cumulative.  Deterministic given the rng state.
class WeightedSampler {
 public:
  explicit WeightedSampler(const std::vector<double>& weights);
  std::size_t sample(SplitMix64& rng) const;
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

 private:
  std::vector<double> cumulative_;
};

// Bootstrap standard error of the mean of samples: resample with replacement
// n_boot times, return the standard deviation of the resampled means.
double bootstrap_stderr(const std::vector<double>& samples, int n_boot,
                        SplitMix64& rng);

// Deterministic low-discrepancy directions on the unit sphere S^{n-1}
// (Halton points pushed through the inverse-CDF map for n = 2, 3; for higher
// n, normalized Halton-seeded normals).  Same input, same output.
std::vector<Vec> sphere_mesh(int dim, int count);

// Moduli of the eigenvalues of a real 3x3 matrix via the closed-form cubic,
// sorted descending.  Cheap prefilter for spectral classification; callers
// needing eigenvectors go through the full solver.
std::array<double, 3> eig_moduli_3x3(const Mat& m);

// 3x3 determinant by compensated cofactor expansion (error-free products
// and sums, FMA based).  The plain formula loses all relative accuracy once
// the entries outgrow |det|^{1/3} --- exactly the regime of long products of
// unit-determinant generators --- while the compensated value stays accurate
// until eps^2 * |entries|^3 reaches |det| (norms ~ e^22 for det 1).
double det3_accurate(const Mat& m);

// Spectrum of a real 3x3 matrix read off the characteristic-polynomial
// invariants of its unit-determinant representative.  Eigensolvers lose half
// to two thirds of the digits at a defective (parabolic) matrix; the trace
// and adjugate trace stay exactly conditioned, and the polynomial
// discriminant comes with a computable rounding bound, so "repeated root"
// is a decision rather than a guess.  For integer matrices the decision is
// exact.
struct Spectrum3 {
  Mat normalized;          // +-input/scale with determinant +1
  double scale = 1.0;      // input moduli = scale * representative moduli
  bool flipped = false;    // true when the input determinant was negative
  double t = 0.0;          // trace of the representative
  double q = 0.0;          // trace of its adjugate (= second symmetric fn)
  double disc = 0.0;       // discriminant of l^3 - t l^2 + q l - 1
  double disc_tol = 0.0;   // rounding bound; |disc| below it is "zero"
  bool degenerate = false; // repeated root to working precision
  int real_count = 3;      // 3, or 1 when a conjugate pair remains
  // degenerate: {double root, double root, simple root} (values);
  // real_count == 3: real roots, descending;
  // real_count == 1: {real root, pair modulus, pair modulus}.
  std::array<double, 3> roots{};
};
Spectrum3 spectrum_3x3(const Mat& m);

}  // namespace hilbert
