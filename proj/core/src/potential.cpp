#include "mflab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mflab/errors.hpp"
#include "mflab/quadrature.hpp"

namespace mflab {

using std::numbers::pi;

Potential Potential::gaussian(double u0, double sigma) {
  if (!(sigma > 0.0)) throw StructuralError("potential: gaussian width must be positive");
  Potential p;
  p.kind = PotentialKind::gaussian;
  p.u0 = u0;
  p.sigma = sigma;
  return p;
}

Potential Potential::cosine(double u0, double k0) {
  if (!(k0 > 0.0)) throw StructuralError("potential: cosine wavenumber must be positive");
  Potential p;
  p.kind = PotentialKind::cosine;
  p.u0 = u0;
  p.k0 = k0;
  return p;
}

double Potential::value(double x) const {
  if (kind == PotentialKind::gaussian)
    return u0 * std::exp(-x * x / (2.0 * sigma * sigma));
  return u0 * std::cos(k0 * x);
}

double Potential::fourier(double q) const {
  if (kind != PotentialKind::gaussian)
    throw PreconditionError("potential: atomic spectrum has no density");
  return u0 * sigma / std::sqrt(2.0 * pi) * std::exp(-0.5 * sigma * sigma * q * q);
}

std::vector<SpectralAtom> Potential::atoms() const {
  if (kind != PotentialKind::cosine)
    throw PreconditionError("potential: only the cosine kind is atomic");
  return {{k0, 0.5 * u0}, {-k0, 0.5 * u0}};
}

std::vector<SpectralAtom> Potential::lattice_measure(const Grid& g) const {
  std::vector<SpectralAtom> m;
  if (kind == PotentialKind::cosine) {
    const double ratio = k0 / g.dual_spacing();
    if (std::abs(ratio - std::round(ratio)) > 1e-12)
      throw StructuralError("potential: cosine wavenumber off the dual lattice breaks periodicity");
    if (std::abs(ratio) >= g.points / 2)
      throw ResolutionError("potential: cosine wavenumber beyond the dual window");
    return atoms();
  }
  const double dk = g.dual_spacing();
  const double peak = std::abs(fourier(0.0));
  for (int j = 0; j < g.points; ++j) {
    const double q = g.dual_coord(j);
    const double w = dk * fourier(q);
    if (std::abs(w) > 1e-18 * std::max(peak, 1.0) * dk) m.emplace_back(q, w);
  }
  return m;
}

std::vector<SpectralAtom> Potential::continuum_measure(int order) const {
  if (kind != PotentialKind::gaussian)
    throw PreconditionError("potential: continuum measure needs a spectral density");
  // window where exp(-sigma^2 q^2/2) reaches ~1e-18
  const double Q = std::sqrt(2.0 * 41.5) / sigma;
  QuadRule r = gauss_legendre(order, -Q, Q);
  std::vector<SpectralAtom> m(order);
  for (int i = 0; i < order; ++i) m[i] = {r.x[i], r.w[i] * fourier(r.x[i])};
  return m;
}

std::vector<double> Potential::on_grid(const Grid& g) const {
  std::vector<double> u(g.points, 0.0);
  const auto measure = lattice_measure(g);
  for (int m = 0; m < g.points; ++m) {
    const double x = g.coord(m);
    double s = 0.0;
    for (const auto& [q, w] : measure) s += w * std::cos(q * x);  // even U, real sum
    u[m] = s;
  }
  return u;
}

double Potential::max_abs_gradient(const Grid& g) const {
  const auto measure = lattice_measure(g);
  double best = 0.0;
  const int fine = 8 * g.points;
  for (int m = 0; m < fine; ++m) {
    const double x = -g.extent + 2.0 * g.extent * m / fine;
    double s = 0.0;
    for (const auto& [q, w] : measure) s += -w * q * std::sin(q * x);
    best = std::max(best, std::abs(s));
  }
  return best;
}

double potential_norm(const Potential& U, int m, double rel_tol) {
  if (m < 0) throw ArityError("potential_norm: moment order must be >= 0");
  if (U.kind == PotentialKind::cosine)
    return std::abs(U.u0) * std::pow(U.k0, m);
  if (U.u0 == 0.0) return 0.0;
  const double Q = std::sqrt(2.0 * 41.5) / U.sigma;
  auto f = [&](double q) { return std::abs(U.fourier(q)) * std::pow(q, m); };
  return 2.0 * adaptive_integrate(f, 0.0, Q, rel_tol, 1e-300);
}

double potential_norm_closed_form(const Potential& U, int m) {
  if (U.kind == PotentialKind::cosine)
    return std::abs(U.u0) * std::pow(U.k0, m);
  return std::abs(U.u0) * U.sigma / std::sqrt(2.0 * pi) *
         std::tgamma(0.5 * (m + 1)) *
         std::pow(2.0 / (U.sigma * U.sigma), 0.5 * (m + 1));
}

double kappa1(const Potential& U, int* arg_m) {
  double best = 0.0;
  int best_m = 1;
  double mfact = 1.0;
  for (int m = 1; m <= 40; ++m) {
    mfact *= m;
    const double v = std::pow(potential_norm(U, m) / mfact, 1.0 / m);
    if (v > best) {
      best = v;
      best_m = m;
    }
  }
  if (arg_m) *arg_m = best_m;
  return best;
}

}  // namespace mflab
