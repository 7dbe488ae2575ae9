#include "hilbert/busemann.hpp"

#include <cmath>
#include <sstream>

#include "hilbert/numerics.hpp"

namespace hilbert {

namespace {

// Cayley-Klein closed form on the unit ball:
//   beta_xi(x, y) = log((1 - x.xi) / sqrt(1 - |x|^2))
//                 - log((1 - y.xi) / sqrt(1 - |y|^2)).
double busemann_ball(const Vec& xi, const Vec& x, const Vec& y) {
  const double fx = (1.0 - x.dot(xi)) / std::sqrt(1.0 - x.squaredNorm());
  const double fy = (1.0 - y.dot(xi)) / std::sqrt(1.0 - y.squaredNorm());
  if (!(fx > 0.0) || !(fy > 0.0))
    throw GeometryError("busemann: basepoint outside the unit ball");
  return std::log(fx) - std::log(fy);
}

// Gauge gradient for the exact bodies; hull bodies have no cheap gradient at
// interior probes, so the truncation drops its O(eta) correction terms there
// (the limit is unchanged, only small-T iterates move slightly).
bool cheap_gauge(const ConvexDomain& domain) {
  return !domain.approximate();
}

Vec gauge_gradient(const ConvexDomain& domain, const Vec& b) {
  return domain.boundary_normal(b);
}

}  // namespace

double busemann_truncated(const ConvexDomain& domain,
                          const HomogeneousPoint& xi, const Vec& x,
                          const Vec& y, double T) {
  const AffineChart& chart = domain.chart();
  const Vec xia = chart.to_affine(xi);
  const Vec d = xia - x;
  if (d.norm() < 1e-14)
    throw GeometryError("busemann: basepoint coincides with the boundary point");

  const LineHits hits_x = domain.line_hits(x, d);
  const double t_a = hits_x.t_minus;
  const double t_xi = hits_x.t_plus;  // ~1 when xi is on the boundary

  // z_T at parameter gap eta below the forward hit; closed form keeps eta
  // meaningful down to e^{-2T} ~ 1e-56 without cancellation.
  const double K = (-t_a / t_xi) * std::exp(2.0 * T);
  const double eta = (t_xi - t_a) / (1.0 + K);
  const double u = t_xi - eta;
  const Vec z = x + u * d;
  const double sig_x = t_a / u;

  const Vec dy = z - y;
  const LineHits hits_y = domain.line_hits(y, dy);
  const double sig_y = hits_y.t_minus;
  const Vec xi_y = y + hits_y.t_plus * dy;

  const Vec xi_x = x + t_xi * d;
  const double den = gauge_gradient(domain, xi_x).dot(z - x);
  const double num = gauge_gradient(domain, xi_y).dot(dy);
  if (!(den > 0.0) || !(num > 0.0))
    throw NumericalError("busemann: degenerate boundary gradient ratio");

  double zeta_x = 0.0, zeta_y = 0.0;
  if (eta >= 1e-6 && cheap_gauge(domain)) {
    const double gz = domain.defect(z);
    zeta_x = -gz / den;
    zeta_y = -gz / num;
  }

  const auto chord_log = [](double s) {
    // log((1 - s) / (-s)) for a backward root s < 0.
    return std::log((1.0 - s) / (-s));
  };
  return 0.5 * (chord_log(sig_x) - chord_log(sig_y) + std::log1p(zeta_x) -
                std::log1p(zeta_y) - std::log(num / den));
}

double busemann_adaptive(const ConvexDomain& domain,
                         const HomogeneousPoint& xi, const Vec& x,
                         const Vec& y, double tol, double t_max) {
  double prev = 0.0;
  bool have_prev = false;
  for (double T = 1.0; T <= t_max * 1.0000001; T *= 2.0) {
    const double val = busemann_truncated(domain, xi, x, y, T);
    if (have_prev && std::abs(val - prev) < tol) return val;
    prev = val;
    have_prev = true;
  }
  std::ostringstream os;
  os << "busemann_adaptive: no Cauchy agreement below " << tol
     << " up to T = " << t_max << "; last iterates "
     << busemann_truncated(domain, xi, x, y, t_max / 2.0) << " and " << prev;
  throw NumericalError(os.str());
}

double busemann(const ConvexDomain& domain, const HomogeneousPoint& xi,
                const Vec& x, const Vec& y) {
  if (const auto* e = std::get_if<Ellipsoid>(&domain.body())) {
    // Map x^T Q x < 1 onto the unit ball by u = L^T x with Q = L L^T.
    Eigen::LLT<Mat> llt(e->Q);
    const Mat lt = llt.matrixL().transpose();
    Vec xia = domain.chart().to_affine(xi);
    Vec xib = lt * xia;
    const double bn = xib.norm();
    if (std::abs(bn - 1.0) > 1e-8)
      throw GeometryError("busemann: the reference point is not on the boundary");
    return busemann_ball(xib / bn, lt * x, lt * y);
  }
  return busemann_adaptive(domain, xi, x, y);
}

double busemann(const ConvexDomain& domain, const HomogeneousPoint& xi,
                const HomogeneousPoint& x, const HomogeneousPoint& y) {
  const AffineChart& chart = domain.chart();
  return busemann(domain, xi, chart.to_affine(x), chart.to_affine(y));
}

double gromov_product(const ConvexDomain& domain, const Vec& x,
                      const HomogeneousPoint& xi,
                      const HomogeneousPoint& eta) {
  if (xi.approx_equal(eta))
    throw ArgumentError("gromov_product: boundary points coincide");
  const AffineChart& chart = domain.chart();
  const Vec xia = chart.to_affine(xi);
  const Vec etaa = chart.to_affine(eta);
  const Vec mid = 0.5 * (xia + etaa);
  const double value =
      0.5 * (busemann(domain, xi, x, mid) + busemann(domain, eta, x, mid));
  return value < 0.0 ? 0.0 : value;
}

double gromov_product_mixed(const ConvexDomain& domain, const Vec& x,
                            const Vec& y, const HomogeneousPoint& xi) {
  return 0.5 * (hilbert_distance_affine(domain, x, y) +
                busemann(domain, xi, x, y));
}

double visual_kernel(const ConvexDomain& domain, const Vec& x,
                     const HomogeneousPoint& xi, const HomogeneousPoint& eta) {
  if (xi.approx_equal(eta)) return 0.0;
  return std::exp(-gromov_product(domain, x, xi, eta));
}

double cross_ratio_at(const ConvexDomain& domain, const Vec& basepoint,
                      const HomogeneousPoint& a, const HomogeneousPoint& b,
                      const HomogeneousPoint& c, const HomogeneousPoint& d) {
  const HomogeneousPoint* pts[] = {&a, &b, &c, &d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (pts[i]->approx_equal(*pts[j]))
        throw ArgumentError("cross_ratio: boundary points must be pairwise "
                            "distinct");
  // B(a, b, c, d) = b(a,c) + b(b,d) - b(a,d) - b(b,c) with b(p,q) = -2<p,q>,
  // which rearranges to the Gromov-product combination below.
  const auto g = [&](const HomogeneousPoint& p, const HomogeneousPoint& q) {
    return gromov_product(domain, basepoint, p, q);
  };
  return 2.0 * (g(a, d) + g(b, c) - g(a, c) - g(b, d));
}

double cross_ratio(const ConvexDomain& domain, const HomogeneousPoint& a,
                   const HomogeneousPoint& b, const HomogeneousPoint& c,
                   const HomogeneousPoint& d) {
  return cross_ratio_at(domain, domain.center(), a, b, c, d);
}

bool in_horoball(const ConvexDomain& domain, const Horoball& hb,
                 const Vec& y) {
  return busemann(domain, hb.base, hb.anchor, y) > 0.0;
}

}  // namespace hilbert
