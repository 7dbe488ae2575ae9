#include "hilbert/domain.hpp"

#include <cmath>
#include <sstream>

#include "hilbert/numerics.hpp"

namespace hilbert {

namespace {

// Convex-combination clip: extreme chord parameters t with x + t d in the
// hull, found as max/min of t subject to P^T lambda - t d = x, sum lambda = 1,
// lambda >= 0.  Also reports the supporting lambda of the maximizing face.
struct HullClip {
  double t;
  Vec lambda;
};

HullClip hull_clip(const OrbitHull& hull, const Vec& x, const Vec& d,
                   bool forward) {
  const int m = static_cast<int>(hull.points.rows());
  const int n = static_cast<int>(hull.points.cols());
  // Variables: lambda (m), t_pos, t_neg.
  Mat A(n + 1, m + 2);
  Vec b(n + 1), c(m + 2);
  A.setZero();
  c.setZero();
  A.topLeftCorner(n, m) = hull.points.transpose();
  A.col(m).head(n) = -d;
  A.col(m + 1).head(n) = d;
  A.row(n).head(m).setOnes();
  b.head(n) = x;
  b(n) = 1.0;
  c(m) = forward ? 1.0 : -1.0;
  c(m + 1) = -c(m);
  const auto sol = simplex_max(A, b, c);
  if (!sol)
    throw GeometryError("hull_clip: point is outside the hull's span");
  // The objective extremizes t = t_pos - t_neg in the requested direction;
  // the reported parameter is the same expression either way.
  HullClip out;
  out.t = sol->v(m) - sol->v(m + 1);
  out.lambda = sol->v.head(m);
  return out;
}

double pnorm_defect(const PNormBall& ball, const Vec& x) {
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i)
    s += std::pow(std::abs(x(i)) / ball.radius, ball.p);
  return s - 1.0;
}

Vec pnorm_gradient(const PNormBall& ball, const Vec& x) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    const double u = x(i) / ball.radius;
    g(i) = ball.p * std::copysign(std::pow(std::abs(u), ball.p - 1.0), u) /
           ball.radius;
  }
  return g;
}

}  // namespace

ConvexDomain::ConvexDomain(std::variant<Ellipsoid, PNormBall, OrbitHull> body,
                           int dim)
    : body_(std::move(body)), dim_(dim), chart_(0, dim + 1) {}

ConvexDomain ConvexDomain::ellipsoid(const Mat& Q) {
  if (Q.rows() != Q.cols())
    throw ArgumentError("ConvexDomain::ellipsoid: Q must be square");
  Mat sym = 0.5 * (Q + Q.transpose());
  Eigen::LLT<Mat> llt(sym);
  if (llt.info() != Eigen::Success)
    throw ArgumentError("ConvexDomain::ellipsoid: Q must be positive definite");
  return ConvexDomain(Ellipsoid{std::move(sym)}, static_cast<int>(Q.rows()));
}

ConvexDomain ConvexDomain::unit_ball(int dim) {
  return ellipsoid(Mat::Identity(dim, dim));
}

ConvexDomain ConvexDomain::pnorm_ball(double p, double radius, int dim) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw ArgumentError("ConvexDomain::pnorm_ball: need 1 < p < infinity");
  if (!(radius > 0.0))
    throw ArgumentError("ConvexDomain::pnorm_ball: radius must be positive");
  if (dim < 1) throw ArgumentError("ConvexDomain::pnorm_ball: bad dimension");
  return ConvexDomain(PNormBall{p, radius}, dim);
}

ConvexDomain ConvexDomain::orbit_hull(const Mat& cloud) {
  const int m = static_cast<int>(cloud.rows());
  const int n = static_cast<int>(cloud.cols());
  if (m < n + 1)
    throw ArgumentError("ConvexDomain::orbit_hull: need at least dim+1 points");
  Vec centroid = cloud.colwise().mean();
  Mat centered = cloud.rowwise() - centroid.transpose();
  Eigen::JacobiSVD<Mat> svd(centered);
  if (svd.singularValues()(n - 1) < 1e-10 * svd.singularValues()(0))
    throw ArgumentError(
        "ConvexDomain::orbit_hull: cloud is degenerate (no interior)");
  return ConvexDomain(OrbitHull{cloud, std::move(centroid)}, n);
}

double ConvexDomain::defect(const Vec& x) const {
  if (x.size() != dim_) throw ArgumentError("defect: dimension mismatch");
  if (const auto* e = std::get_if<Ellipsoid>(&body_))
    return x.dot(e->Q * x) - 1.0;
  if (const auto* p = std::get_if<PNormBall>(&body_))
    return pnorm_defect(*p, x);
  const auto& hull = std::get<OrbitHull>(body_);
  Vec d = x - hull.centroid;
  if (d.norm() < 1e-15) return -1.0;
  const double t = hull_clip(hull, hull.centroid, d, true).t;
  // Minkowski functional about the centroid: x sits at parameter 1, the
  // boundary at t, so the gauge value is 1/t.
  return 1.0 / t - 1.0;
}

bool ConvexDomain::contains(const Vec& x, double margin) const {
  if (x.size() != dim_) return false;
  return defect(x) < -margin;
}

bool ConvexDomain::contains_point(const HomogeneousPoint& p,
                                  double margin) const {
  Vec x;
  try {
    x = chart_.to_affine(p);
  } catch (const ChartError&) {
    return false;
  }
  return contains(x, margin);
}

LineHits ConvexDomain::line_hits(const Vec& x, const Vec& d) const {
  if (x.size() != dim_ || d.size() != dim_)
    throw ArgumentError("line_hits: dimension mismatch");
  if (d.norm() < 1e-14)
    throw GeometryError("line_hits: direction is numerically zero");
  if (!(defect(x) < 0.0))
    throw GeometryError("line_hits: basepoint is not interior");

  if (const auto* e = std::get_if<Ellipsoid>(&body_)) {
    const Vec Qd = e->Q * d;
    const double a = d.dot(Qd);
    const double b = 2.0 * x.dot(Qd);
    const double c = x.dot(e->Q * x) - 1.0;
    const auto roots = solve_quadratic(a, b, c);
    if (roots.size() != 2)
      throw GeometryError("line_hits: chord does not meet the boundary twice");
    return {roots[0], roots[1]};
  }

  if (const auto* pb = std::get_if<PNormBall>(&body_)) {
    const auto g = [&](double t) { return pnorm_defect(*pb, x + t * d); };
    const auto dg = [&](double t) {
      return pnorm_gradient(*pb, x + t * d).dot(d);
    };
    // Bracket the forward hit: the ball sits inside |y|_inf <= radius, so a
    // finite doubling always exits.
    const double step0 = 0.25 * pb->radius / d.lpNorm<Eigen::Infinity>();
    double hi = step0;
    int guard = 0;
    while (g(hi) < 0.0) {
      hi *= 2.0;
      if (++guard > 80)
        throw GeometryError("line_hits: failed to bracket forward hit");
    }
    double lo = -step0;
    guard = 0;
    while (g(lo) < 0.0) {
      lo *= 2.0;
      if (++guard > 80)
        throw GeometryError("line_hits: failed to bracket backward hit");
    }
    LineHits hits;
    hits.t_plus = newton_bisect(g, dg, 0.0, hi, 1e-15 * (1.0 + hi));
    hits.t_minus = -newton_bisect(
        [&](double s) { return g(-s); }, [&](double s) { return -dg(-s); },
        0.0, -lo, 1e-15 * (1.0 - lo));
    return hits;
  }

  const auto& hull = std::get<OrbitHull>(body_);
  LineHits hits;
  hits.t_plus = hull_clip(hull, x, d, true).t;
  hits.t_minus = hull_clip(hull, x, d, false).t;
  return hits;
}

Vec ConvexDomain::boundary_normal(const Vec& b) const {
  if (b.size() != dim_)
    throw ArgumentError("boundary_normal: dimension mismatch");
  if (const auto* e = std::get_if<Ellipsoid>(&body_)) return 2.0 * (e->Q * b);
  if (const auto* p = std::get_if<PNormBall>(&body_))
    return pnorm_gradient(*p, b);

  const auto& hull = std::get<OrbitHull>(body_);
  Vec d = b - hull.centroid;
  if (d.norm() < 1e-14)
    throw GeometryError("boundary_normal: point coincides with the centroid");
  const HullClip clip = hull_clip(hull, hull.centroid, d, true);
  // Least-norm functional a with a . (q_i - centroid) = 1 over the exit
  // face's support points; orientation is outward because a . (b - c) = 1.
  std::vector<int> support;
  for (int i = 0; i < clip.lambda.size(); ++i)
    if (clip.lambda(i) > 1e-10) support.push_back(i);
  if (support.empty())
    throw NumericalError("boundary_normal: empty support from clip");
  Mat Qrows(static_cast<int>(support.size()), dim_);
  for (std::size_t k = 0; k < support.size(); ++k)
    Qrows.row(static_cast<int>(k)) =
        hull.points.row(support[k]) - hull.centroid.transpose();
  Vec ones = Vec::Ones(Qrows.rows());
  Vec a = Qrows.completeOrthogonalDecomposition().solve(ones);
  return a;
}

Vec ConvexDomain::center() const {
  if (const auto* h = std::get_if<OrbitHull>(&body_)) return h->centroid;
  return Vec::Zero(dim_);
}

std::string ConvexDomain::describe() const {
  std::ostringstream os;
  if (const auto* e = std::get_if<Ellipsoid>(&body_)) {
    os << "ellipsoid dim=" << dim_ << " Q=[";
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        os << e->Q(i, j) << ((i == dim_ - 1 && j == dim_ - 1) ? "]" : " ");
  } else if (const auto* p = std::get_if<PNormBall>(&body_)) {
    os << "pnorm dim=" << dim_ << " p=" << p->p << " radius=" << p->radius;
  } else {
    const auto& h = std::get<OrbitHull>(body_);
    os << "orbit-hull dim=" << dim_ << " points=" << h.points.rows();
  }
  return os.str();
}

std::pair<HomogeneousPoint, HomogeneousPoint> boundary_hits(
    const ConvexDomain& domain, const HomogeneousPoint& x, const Vec& d) {
  const Vec xa = domain.chart().to_affine(x);
  const LineHits hits = domain.line_hits(xa, d);
  const Vec fwd = xa + hits.t_plus * d;
  const Vec bwd = xa + hits.t_minus * d;
  return {domain.chart().to_projective(fwd), domain.chart().to_projective(bwd)};
}

Vec ray_boundary(const ConvexDomain& domain, const Vec& from,
                 const Vec& through) {
  Vec d = through - from;
  const LineHits hits = domain.line_hits(from, d);
  return from + hits.t_plus * d;
}

}  // namespace hilbert
