#include "hilbert/projective.hpp"

#include <cmath>

#include "hilbert/numerics.hpp"

namespace hilbert {

Vec canonical_rep(Vec raw) {
  const double norm = raw.norm();
  if (!(norm > 1e-14))
    throw ArgumentError("canonical_rep: zero vector is not a point");
  raw /= norm;
  for (int i = 0; i < raw.size(); ++i) {
    if (std::abs(raw(i)) > 1e-8) {
      if (raw(i) < 0.0) raw = -raw;
      break;
    }
  }
  return raw;
}

HomogeneousPoint::HomogeneousPoint(const Vec& raw)
    : coords_(canonical_rep(raw)) {}

bool HomogeneousPoint::approx_equal(const HomogeneousPoint& other,
                                    double tol) const {
  if (coords_.size() != other.coords_.size()) return false;
  return (coords_ - other.coords_).lpNorm<Eigen::Infinity>() <= tol;
}

Vec AffineChart::to_affine_raw(const Vec& rep) const {
  if (rep.size() != ambient_)
    throw ArgumentError("AffineChart: dimension mismatch");
  const double w = rep(index_);
  if (std::abs(w) <= 1e-12 * rep.norm())
    throw ChartError("AffineChart: point at infinity for this chart");
  Vec out(ambient_ - 1);
  int k = 0;
  for (int i = 0; i < ambient_; ++i) {
    if (i == index_) continue;
    out(k++) = rep(i) / w;
  }
  return out;
}

Vec AffineChart::to_affine(const HomogeneousPoint& p) const {
  return to_affine_raw(p.coords());
}

Vec AffineChart::lift(const Vec& affine) const {
  if (affine.size() != ambient_ - 1)
    throw ArgumentError("AffineChart: affine dimension mismatch");
  Vec rep(ambient_);
  int k = 0;
  for (int i = 0; i < ambient_; ++i) {
    if (i == index_) {
      rep(i) = 1.0;
    } else {
      rep(i) = affine(k++);
    }
  }
  return rep;
}

HomogeneousPoint AffineChart::to_projective(const Vec& affine) const {
  return HomogeneousPoint(lift(affine));
}

Mat det_normalize(const Mat& raw) {
  if (raw.rows() != raw.cols())
    throw ArgumentError("det_normalize: matrix must be square");
  const int n = static_cast<int>(raw.rows());
  const double scale = raw.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw ArgumentError("det_normalize: zero matrix");
  if (n == 3) {
    // Compensated determinant on the raw entries: a long generator product
    // has |det| tiny relative to norm^3, far below what a plain expansion
    // resolves, but it is still an honest unit-det representative.  The
    // singularity guard is therefore relative to the norm, near the floor
    // of the compensated arithmetic.
    const double det = det3_accurate(raw);
    if (std::abs(det) < 1e-30 * scale * scale * scale)
      throw ArgumentError("det_normalize: matrix is numerically singular");
    return raw / std::cbrt(std::abs(det));
  }
  // Scale out the magnitude first so the determinant of the scaled matrix is
  // O(1); avoids overflow for products of many generators.
  Mat m = raw / scale;
  const double det = m.determinant();
  if (std::abs(det) < 1e-13)
    throw ArgumentError("det_normalize: matrix is numerically singular");
  m /= std::pow(std::abs(det), 1.0 / static_cast<double>(n));
  return m;
}

ProjectiveTransform::ProjectiveTransform(const Mat& raw)
    : m_(det_normalize(raw)) {}

ProjectiveTransform ProjectiveTransform::identity(int ambient_dim) {
  return ProjectiveTransform(Mat::Identity(ambient_dim, ambient_dim), true);
}

HomogeneousPoint ProjectiveTransform::apply(const HomogeneousPoint& p) const {
  return HomogeneousPoint(m_ * p.coords());
}

Vec ProjectiveTransform::apply_affine(const AffineChart& chart,
                                      const Vec& x) const {
  return chart.to_affine_raw(m_ * chart.lift(x));
}

ProjectiveTransform ProjectiveTransform::inverse() const {
  Mat inv = m_.inverse();
  return ProjectiveTransform(det_normalize(inv), true);
}

ProjectiveTransform ProjectiveTransform::operator*(
    const ProjectiveTransform& rhs) const {
  return ProjectiveTransform(det_normalize(m_ * rhs.m_), true);
}

}  // namespace hilbert
