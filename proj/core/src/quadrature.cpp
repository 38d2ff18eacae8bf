#include "mflab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "mflab/errors.hpp"

namespace mflab {

namespace {

// Kronrod 15 abscissae/weights on [-1,1] (positive half) with embedded
// Gauss 7.
constexpr double xk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double value;
  double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = wk[7] * f(c);
  double resg = wg[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double fv = f(c - h * xk[i]) + f(c + h * xk[i]);
    resk += wk[i] * fv;
    if (i % 2 == 1) resg += wg[i / 2] * fv;
  }
  return {resk * h, std::abs(resk - resg) * h};
}

double recurse(const std::function<double(double)>& f, double a, double b,
               Panel p, double rel_tol, double abs_tol, int depth,
               int max_depth) {
  const double tol = std::max(abs_tol, rel_tol * std::abs(p.value));
  if (p.err <= tol || depth >= max_depth) return p.value;
  const double m = 0.5 * (a + b);
  Panel left = gk15(f, a, m), right = gk15(f, m, b);
  return recurse(f, a, m, left, rel_tol, abs_tol, depth + 1, max_depth) +
         recurse(f, m, b, right, rel_tol, abs_tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol,
                          int max_depth) {
  if (!(b > a)) throw WindowError("adaptive_integrate: empty interval");
  return recurse(f, a, b, gk15(f, a, b), rel_tol, abs_tol, 0, max_depth);
}

QuadRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw WindowError("gauss_legendre: order must be >= 1");
  QuadRule r;
  r.x.resize(order);
  r.w.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton from the Chebyshev-like initial guess
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    r.x[i] = xm - xl * z;
    r.x[order - 1 - i] = xm + xl * z;
    r.w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    r.w[order - 1 - i] = r.w[i];
  }
  return r;
}

}  // namespace mflab
