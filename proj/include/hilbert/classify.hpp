#pragma once

#include <optional>

#include "hilbert/domain.hpp"
#include "hilbert/projective.hpp"

namespace hilbert {

enum class IsometryClass { Hyperbolic, Parabolic, Elliptic };

struct SpectralData {
  IsometryClass type;
  CVec eigenvalues;           // sorted by modulus, descending
  double translation_length;  // 0 unless hyperbolic
  std::optional<HomogeneousPoint> attracting;
  std::optional<HomogeneousPoint> repelling;
};

// Spectral classification of a projective automorphism of the domain:
//   hyperbolic  spectral radius ratio > 1 + 1e-9 with simple positive real
//               top and bottom eigenvalues (fixed points on the boundary)
//   parabolic   all eigenvalue moduli equal to relative tolerance 1e-9 and
//               the eigenvector matrix numerically rank-deficient
//               (sigma_min / sigma_max < 1e-6), i.e. non-diagonalizable
//   elliptic    all moduli equal, diagonalizable
// The domain is used to orient the boundary fixed points into its chart.
SpectralData classify(const ProjectiveTransform& g, const ConvexDomain& domain);

// Translation length alone: half the log-ratio of extreme eigenvalue moduli
// for hyperbolic elements, zero otherwise.
double translation_length(const ProjectiveTransform& g);

namespace detail {
// Cheap hyperbolicity prefilter for 3x3 matrices: true when the closed-form
// eigenvalue moduli already show a spectral gap above `ratio_floor`.
bool maybe_hyperbolic_3x3(const Mat& m, double ratio_floor);
}  // namespace detail

}  // namespace hilbert
