#include "mflab/families.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "mflab/errors.hpp"

namespace mflab {

OrbitalSet plane_wave_family(const Grid& g, int N) {
  if (g.dim != 1) throw StructuralError("plane_wave_family: 1-d grids only");
  if (N < 1 || N % 2 == 0) throw StructuralError("plane_wave_family: N must be odd");
  const int half = (N - 1) / 2;
  if (half >= g.points / 2) throw ResolutionError("plane_wave_family: shell beyond the dual window");
  OrbitalSet s{g, Eigen::MatrixXcd(g.points, N), std::vector<double>(N, 1.0)};
  const double norm = 1.0 / std::sqrt(2.0 * g.extent);
  for (int j = 0; j < N; ++j) {
    const double k = (j - half) * g.dual_spacing();
    for (int m = 0; m < g.points; ++m)
      s.phi(m, j) = norm * std::exp(cplx(0.0, k * g.coord(m)));
  }
  return s;
}

Eigen::VectorXcd gaussian_orbital(const Grid& g, double center, double width) {
  if (width < 2.0 * g.spacing())
    throw ResolutionError("gaussian_orbital: width under two lattice spacings");
  Eigen::VectorXcd v(g.points);
  for (int m = 0; m < g.points; ++m) {
    // nearest periodic image
    double dx = std::remainder(g.coord(m) - center, 2.0 * g.extent);
    v(m) = std::exp(-dx * dx / (width * width));
  }
  v /= std::sqrt(g.spacing()) * v.norm();
  return v;
}

OrbitalSet localized_family(const Grid& g, double c, double eps, double sigma) {
  if (g.dim != 1) throw StructuralError("localized_family: 1-d grids only");
  if (!(c > 0.0) || !(eps > 0.0) || !(sigma > 0.0))
    throw StructuralError("localized_family: parameters must be positive");
  const int K = int(std::floor(c / eps));
  const double w = eps * sigma;
  const double edge = g.extent - K;  // outermost center to the boundary
  if (edge <= 0.0 || std::exp(-edge * edge / (w * w)) > 1e-10)
    throw ResolutionError("localized_family: envelope does not decay inside the box");
  const int N = 2 * K + 1;
  OrbitalSet s{g, Eigen::MatrixXcd(g.points, N), std::vector<double>(N, 1.0)};
  for (int k = -K; k <= K; ++k) s.phi.col(k + K) = gaussian_orbital(g, double(k), w);
  return lowdin_orthonormalize(s);
}

OrbitalSet shifted_family(const OrbitalSet& base, double e) {
  const Grid& g = base.grid;
  const double ratio = e / g.spacing();
  if (std::abs(ratio - std::round(ratio)) > 1e-12)
    throw StructuralError("shifted_family: shift off the lattice");
  const int shift = int(std::round(ratio));
  const int n = g.points;
  OrbitalSet s = base;
  for (int j = 0; j < base.modes(); ++j) {
    Eigen::VectorXcd raw(n);
    for (int m = 0; m < n; ++m)
      raw(m) = base.phi(m, j) + base.phi(((m - shift) % n + n) % n, j);
    raw /= std::sqrt(g.spacing()) * raw.norm();  // beta_j = 1 / ||phi + phi_e||^2
    s.phi.col(j) = raw;
  }
  return lowdin_orthonormalize(s);
}

OrbitalSet random_slater(const Grid& g, int N, int band, unsigned seed) {
  if (g.dim != 1) throw StructuralError("random_slater: 1-d grids only");
  const int modes = 2 * band + 1;
  if (band >= g.points / 2) throw ResolutionError("random_slater: band beyond the dual window");
  if (N > modes) throw ArityError("random_slater: more orbitals than band modes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd C(modes, N);
  for (int i = 0; i < modes; ++i)
    for (int j = 0; j < N; ++j) C(i, j) = cplx(gauss(rng), gauss(rng));
  // unitary columns in coefficient space give h-orthonormal orbitals
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(C);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(modes, N);
  OrbitalSet s{g, Eigen::MatrixXcd::Zero(g.points, N), std::vector<double>(N, 1.0)};
  const double norm = 1.0 / std::sqrt(2.0 * g.extent);
  for (int i = 0; i < modes; ++i) {
    const double k = (i - band) * g.dual_spacing();
    Eigen::VectorXcd wave(g.points);
    for (int m = 0; m < g.points; ++m)
      wave(m) = norm * std::exp(cplx(0.0, k * g.coord(m)));
    s.phi.noalias() += wave * Q.row(i);
  }
  return s;
}

}  // namespace mflab
