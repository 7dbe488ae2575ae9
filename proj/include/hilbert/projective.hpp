#pragma once

#include "hilbert/types.hpp"

namespace hilbert {

// A point of RP^n stored by its canonical representative: unit Euclidean
// norm, first coordinate of modulus > 1e-8 made positive.  Canonicalizing at
// construction makes equality and hashing well defined.
class HomogeneousPoint {
 public:
  explicit HomogeneousPoint(const Vec& raw);
  const Vec& coords() const { return coords_; }
  int ambient_dim() const { return static_cast<int>(coords_.size()); }
  bool approx_equal(const HomogeneousPoint& other,
                    double tol = kPointTol) const;

 private:
  Vec coords_;
};

// Canonicalize a raw representative in place (unit norm, sign fixed).
Vec canonical_rep(Vec raw);

// Affine chart x_index != 0, mapping [x] to the n-vector of remaining
// coordinates divided by x_index.
class AffineChart {
 public:
  explicit AffineChart(int index = 0, int ambient_dim = 3)
      : index_(index), ambient_(ambient_dim) {
    if (index < 0 || index >= ambient_dim)
      throw ArgumentError("AffineChart: index out of range");
  }
  int index() const { return index_; }
  int ambient_dim() const { return ambient_; }
  int affine_dim() const { return ambient_ - 1; }

  // Throws ChartError when the point lies on the chart's hyperplane at
  // infinity (|x_index| below 1e-12 relative to the representative norm).
  Vec to_affine(const HomogeneousPoint& p) const;
  Vec to_affine_raw(const Vec& rep) const;
  HomogeneousPoint to_projective(const Vec& affine) const;
  Vec lift(const Vec& affine) const;  // affine point to raw representative

 private:
  int index_;
  int ambient_;
};

// Projectivized linear map with the representative normalized to |det| = 1.
class ProjectiveTransform {
 public:
  explicit ProjectiveTransform(const Mat& raw);
  static ProjectiveTransform identity(int ambient_dim);
  const Mat& matrix() const { return m_; }
  int ambient_dim() const { return static_cast<int>(m_.rows()); }
  HomogeneousPoint apply(const HomogeneousPoint& p) const;
  Vec apply_raw(const Vec& rep) const { return m_ * rep; }
  // Action read through a chart; throws ChartError if the image escapes it.
  Vec apply_affine(const AffineChart& chart, const Vec& x) const;
  ProjectiveTransform inverse() const;
  ProjectiveTransform operator*(const ProjectiveTransform& rhs) const;

 private:
  explicit ProjectiveTransform(Mat m, bool) : m_(std::move(m)) {}
  Mat m_;
};

// Normalize a matrix representative to |det| = 1; throws ArgumentError when
// the determinant is numerically zero.
Mat det_normalize(const Mat& raw);

}  // namespace hilbert
