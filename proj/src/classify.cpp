#include "hilbert/classify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "hilbert/numerics.hpp"

namespace hilbert {

namespace {

// Kernel direction of (A - lambda I) via SVD; more robust than the raw
// eigenvector for defective eigenvalues.
Vec kernel_direction(const Mat& a, double lambda) {
  Mat shifted = a - lambda * Mat::Identity(a.rows(), a.cols());
  Eigen::JacobiSVD<Mat> svd(shifted, Eigen::ComputeFullV);
  return svd.matrixV().col(a.cols() - 1);
}

// Soft sanity check: a boundary fixed point of an automorphism must lie on
// the boundary of an exact body.  Hull bodies are approximate, so skip them.
void check_on_boundary(const ConvexDomain& domain, const HomogeneousPoint& p) {
  if (domain.approximate()) return;
  Vec x;
  try {
    x = domain.chart().to_affine(p);
  } catch (const ChartError&) {
    throw GeometryError(
        "classify: fixed point escapes the domain chart; the map does not "
        "preserve the domain");
  }
  if (std::abs(domain.defect(x)) > 1e-3)
    throw GeometryError(
        "classify: fixed point is far from the boundary; the map does not "
        "preserve the domain");
}

// Diagonalizability measured on the conditioning of the eigenvector matrix;
// a defective matrix collapses two columns.
bool numerically_semisimple(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalError("classify: eigensolver failed to converge");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
  const int n = static_cast<int>(m.rows());
  return svd.singularValues()(n - 1) / svd.singularValues()(0) >= 1e-6;
}

SpectralData classify_3x3(const ProjectiveTransform& g,
                          const ConvexDomain& domain) {
  const Spectrum3 sp = spectrum_3x3(g.matrix());
  const Mat& mhat = sp.normalized;
  const double sign = sp.flipped ? -1.0 : 1.0;

  SpectralData data;
  data.translation_length = 0.0;
  CVec vals(3);
  for (int i = 0; i < 3; ++i)
    vals(i) = sign * sp.scale * sp.roots[static_cast<std::size_t>(i)];

  if (sp.degenerate) {
    const double d = sp.roots[0];   // repeated root
    const double s = sp.roots[2];   // simple root, d^2 s = 1
    data.eigenvalues = vals;
    if (!numerically_semisimple(mhat)) {
      // A Jordan block off the unit circle would be a quasi-hyperbolic map;
      // those fix no strictly convex body.
      if (std::abs(std::abs(d) - 1.0) > 1e-6)
        throw ArgumentError(
            "classify: defective repeated eigenvalue off the unit circle; "
            "input is not an automorphism of a strictly convex domain");
      data.type = IsometryClass::Parabolic;
      const HomogeneousPoint fix{kernel_direction(mhat, d)};
      data.attracting = fix;
      data.repelling = fix;
      check_on_boundary(domain, *data.attracting);
      return data;
    }
    // Diagonalizable with a repeated eigenvalue: the identity or an order-2
    // rotation.  A repeated modulus away from 1 would fix a boundary
    // segment, impossible for a strictly convex body.
    if (std::abs(std::abs(d) - 1.0) > 1e-6 ||
        std::abs(std::abs(s) - 1.0) > 1e-6)
      throw ArgumentError(
          "classify: semisimple repeated spectrum off the unit circle; "
          "input is not an automorphism of a strictly convex domain");
    data.type = IsometryClass::Elliptic;
    return data;
  }

  if (sp.real_count == 1) {
    // One real root r > 0 and a conjugate pair of modulus 1/sqrt(r): the
    // moduli agree only at r = 1, anything else rotates while contracting.
    const double r = sp.roots[0];
    const double rho = sp.roots[1];
    if (std::abs(r - 1.0) > 1e-8)
      throw ArgumentError(
          "classify: rotating spectrum with a modulus gap; input is not an "
          "automorphism of a strictly convex domain");
    const double re = 0.5 * (sp.t - r);
    const double im2 = rho * rho - re * re;
    const double im = std::sqrt(std::max(0.0, im2));
    vals(0) = sign * sp.scale * r;
    vals(1) = sign * sp.scale * std::complex<double>(re, im);
    vals(2) = sign * sp.scale * std::complex<double>(re, -im);
    data.eigenvalues = vals;
    data.type = IsometryClass::Elliptic;
    return data;
  }

  // Three distinct real roots: biproximal, so hyperbolic.  Top and bottom
  // by modulus (a negative value marks a glide along the axis).
  int top = 0, bot = 0;
  for (int i = 1; i < 3; ++i) {
    const double a = std::abs(sp.roots[static_cast<std::size_t>(i)]);
    if (a > std::abs(sp.roots[static_cast<std::size_t>(top)])) top = i;
    if (a < std::abs(sp.roots[static_cast<std::size_t>(bot)])) bot = i;
  }
  const double lt = std::abs(sp.roots[static_cast<std::size_t>(top)]);
  const double lb = std::abs(sp.roots[static_cast<std::size_t>(bot)]);
  std::sort(vals.data(), vals.data() + 3,
            [](const std::complex<double>& a, const std::complex<double>& b) {
              return std::abs(a) > std::abs(b);
            });
  data.eigenvalues = vals;
  data.type = IsometryClass::Hyperbolic;
  data.translation_length = 0.5 * std::log(lt / lb);
  data.attracting = HomogeneousPoint(
      kernel_direction(mhat, sp.roots[static_cast<std::size_t>(top)]));
  data.repelling = HomogeneousPoint(
      kernel_direction(mhat, sp.roots[static_cast<std::size_t>(bot)]));
  check_on_boundary(domain, *data.attracting);
  check_on_boundary(domain, *data.repelling);
  return data;
}

}  // namespace

SpectralData classify(const ProjectiveTransform& g,
                      const ConvexDomain& domain) {
  const Mat& m = g.matrix();
  const int n = static_cast<int>(m.rows());
  if (n == 3) return classify_3x3(g, domain);

  // Generic-dimension fallback: eigensolver moduli.  Defective spectra are
  // only resolved to about cbrt(machine epsilon) here; fine for the sizes
  // this path sees.
  Eigen::EigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalError("classify: eigensolver failed to converge");

  CVec vals = es.eigenvalues();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(vals(a)) > std::abs(vals(b));
  });
  CVec sorted(n);
  for (int i = 0; i < n; ++i) sorted(i) = vals(order[static_cast<std::size_t>(i)]);

  SpectralData data;
  data.eigenvalues = sorted;
  data.translation_length = 0.0;

  const double top = std::abs(sorted(0));
  const double bot = std::abs(sorted(n - 1));
  const double ratio = top / bot;

  if (ratio > 1.0 + kSpectralGapTol) {
    // Proximal check at both ends: the extreme eigenvalue must be simple in
    // modulus and real, or the map cannot preserve a strictly convex domain.
    const bool top_simple = top - std::abs(sorted(1)) > kSpectralGapTol * top;
    const bool bot_simple =
        std::abs(sorted(n - 2)) - bot > kSpectralGapTol * top;
    const bool top_real = std::abs(sorted(0).imag()) < kSpectralGapTol * top;
    const bool bot_real =
        std::abs(sorted(n - 1).imag()) < kSpectralGapTol * top;
    if (!(top_simple && bot_simple && top_real && bot_real))
      throw ArgumentError(
          "classify: spectral gap without a biproximal real spectrum; input "
          "is not an automorphism of a strictly convex domain");
    data.type = IsometryClass::Hyperbolic;
    data.translation_length = 0.5 * std::log(ratio);
    Vec attract = es.eigenvectors().col(order[0]).real();
    Vec repel =
        es.eigenvectors().col(order[static_cast<std::size_t>(n - 1)]).real();
    data.attracting = HomogeneousPoint(attract);
    data.repelling = HomogeneousPoint(repel);
    check_on_boundary(domain, *data.attracting);
    check_on_boundary(domain, *data.repelling);
    return data;
  }

  // All moduli agree to tolerance: parabolic versus elliptic is decided by
  // diagonalizability.
  if (!numerically_semisimple(m)) {
    data.type = IsometryClass::Parabolic;
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(sorted(i).imag()) < std::abs(sorted(best).imag())) best = i;
    const double lambda = sorted(best).real();
    HomogeneousPoint fix{kernel_direction(m, lambda)};
    data.attracting = fix;
    data.repelling = fix;
    check_on_boundary(domain, *data.attracting);
  } else {
    data.type = IsometryClass::Elliptic;
  }
  return data;
}

double translation_length(const ProjectiveTransform& g) {
  const Mat& m = g.matrix();
  const int n = static_cast<int>(m.rows());
  double top = 0.0, bot = 0.0;
  if (n == 3) {
    const auto mod = eig_moduli_3x3(m);
    top = mod[0];
    bot = mod[2];
  } else {
    Eigen::EigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success)
      throw NumericalError("translation_length: eigensolver failed");
    const Vec mods = es.eigenvalues().cwiseAbs();
    top = mods.maxCoeff();
    bot = mods.minCoeff();
  }
  const double ratio = top / bot;
  return ratio > 1.0 + kSpectralGapTol ? 0.5 * std::log(ratio) : 0.0;
}

namespace detail {
bool maybe_hyperbolic_3x3(const Mat& m, double ratio_floor) {
  const auto mod = eig_moduli_3x3(m);
  return mod[0] > mod[2] * (1.0 + ratio_floor);
}
}  // namespace detail

}  // namespace hilbert
