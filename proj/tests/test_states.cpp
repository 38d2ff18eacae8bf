#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mflab/density_matrix.hpp>
#include <mflab/errors.hpp>
#include <mflab/exchange.hpp>
#include <mflab/families.hpp>
#include <mflab/fft.hpp>
#include <mflab/fit.hpp>
#include <mflab/states.hpp>

#include <cmath>
#include <complex>

using namespace mflab;

namespace {
bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("plane-wave family is exactly orthonormal with Pauli-sharp gamma1") {
  Grid g(1, 128, 16.0);
  OrbitalSet s = plane_wave_family(g, 9);
  CHECK(s.orthonormality_defect() < 1e-12);
  CHECK_NOTHROW(s.validate());
  DensityMatrix g1 = s.gamma1();
  CHECK(close(g1.trace(), cplx(1.0, 0.0), 1e-12));
  CHECK(g1.max_eigenvalue() <= 1.0 / 9.0 + 1e-12);
  CHECK(g1.max_eigenvalue() >= 1.0 / 9.0 - 1e-12);  // every shell mode filled

  CHECK_THROWS_AS(plane_wave_family(g, 8), StructuralError);
  CHECK_THROWS_AS(plane_wave_family(g, 129), ResolutionError);
}

TEST_CASE("Slater two-particle marginal: antisymmetry, trace, diagonal exclusion") {
  Grid g(1, 32, 8.0);

  // two lowest torus modes
  OrbitalSet two{g, Eigen::MatrixXcd(g.points, 2), {1.0, 1.0}};
  const double norm = 1.0 / std::sqrt(2.0 * g.extent);
  for (int m = 0; m < g.points; ++m) {
    two.phi(m, 0) = norm;
    two.phi(m, 1) = norm * std::exp(cplx(0.0, g.dual_spacing() * g.coord(m)));
  }
  auto [g1, g2] = slater_marginals(two);
  CHECK(close(g1.trace(), cplx(1.0, 0.0), 1e-12));
  const int n = g.points;
  double anti = 0.0;
  for (int a = 0; a < n; a += 3)
    for (int b = 0; b < n; b += 3)
      for (int c = 0; c < n; c += 3)
        for (int d = 0; d < n; d += 3)
          anti = std::max(anti, std::abs(g2.kernel(a * n + b, c * n + d) +
                                         g2.kernel(b * n + a, c * n + d)));
  CHECK(anti < 1e-12);

  OrbitalSet rnd = random_slater(g, 8, 10, 42);
  auto [r1, r2] = slater_marginals(rnd);
  CHECK(close(r2.trace(), cplx(1.0, 0.0), 1e-8));
  CHECK(r2.hermiticity_defect() < 1e-10);
  CHECK(r2.min_eigenvalue() > -1e-10);
  double diag = 0.0;
  for (int a = 0; a < n; ++a)
    diag = std::max(diag, std::abs(r2.kernel(a * n + a, a * n + a)));
  CHECK(diag < 1e-10);

  OrbitalSet one{g, two.phi.leftCols(1), {1.0}};
  CHECK_THROWS_AS(slater_marginals(one), ArityError);
  OrbitalSet frac = two;
  frac.occ = {0.5, 0.5};
  CHECK_THROWS_AS(slater_marginals(frac), PreconditionError);
}

TEST_CASE("quasifree marginals reproduce Slater algebra") {
  Grid g(1, 32, 8.0);
  OrbitalSet s = random_slater(g, 5, 9, 7);
  auto [g1, g2] = slater_marginals(s);

  DensityMatrix q1 = quasifree_marginal(g1, 1, 5);
  CHECK((q1.kernel - g1.kernel).cwiseAbs().maxCoeff() == 0.0);

  DensityMatrix q2 = quasifree_marginal(g1, 2, 5);
  CHECK((q2.kernel - g2.kernel).cwiseAbs().maxCoeff() < 1e-12);

  // product minus marginal equals the exchange part exactly
  const int n = g.points;
  const double pref = 5.0 / 4.0;
  double defect = 0.0;
  for (int a = 0; a < n; a += 5)
    for (int b = 0; b < n; b += 5)
      for (int c = 0; c < n; c += 5)
        for (int d = 0; d < n; d += 5) {
          cplx ex = q2.kernel(a * n + b, c * n + d) -
                    pref * g1.kernel(a, c) * g1.kernel(b, d);
          cplx expect = -pref * g1.kernel(a, d) * g1.kernel(b, c);
          defect = std::max(defect, std::abs(ex - expect));
        }
  CHECK(defect < 1e-12);

  CHECK_THROWS_AS(quasifree_marginal(g1, 3, 2), ArityError);
  CHECK_THROWS_AS(quasifree_marginal(g1, 4, 8), ArityError);
  DensityMatrix hot = g1;
  hot.kernel *= 1.2;
  CHECK_THROWS_AS(quasifree_marginal(hot, 2, 5), PauliBoundError);
}

TEST_CASE("quasifree two-particle kernel against the hand-expanded mode sum") {
  Grid g(1, 32, 8.0);
  OrbitalSet s{g, Eigen::MatrixXcd(g.points, 4), std::vector<double>(4, 1.0)};
  const double norm = 1.0 / std::sqrt(2.0 * g.extent);
  const int mode[4] = {-1, 0, 1, 2};
  for (int j = 0; j < 4; ++j)
    for (int m = 0; m < g.points; ++m)
      s.phi(m, j) = norm * std::exp(cplx(0.0, mode[j] * g.dual_spacing() * g.coord(m)));
  DensityMatrix q2 = quasifree_marginal(s.gamma1(), 2, 4);

  auto bloch = [&](int a, int c) {
    cplx acc = 0.0;
    for (int j = 0; j < 4; ++j)
      acc += std::exp(cplx(0.0, mode[j] * g.dual_spacing() * (g.coord(a) - g.coord(c))));
    return acc / (4.0 * 2.0 * g.extent);
  };
  const int n = g.points;
  const int probes[5][4] = {{0, 3, 9, 17}, {5, 5, 2, 30}, {1, 12, 12, 1}, {8, 2, 8, 2}, {31, 0, 15, 16}};
  for (auto& p : probes) {
    cplx hand = (16.0 / 12.0) * (bloch(p[0], p[2]) * bloch(p[1], p[3]) -
                                 bloch(p[0], p[3]) * bloch(p[1], p[2]));
    CHECK(close(q2.kernel(p[0] * n + p[1], p[2] * n + p[3]), hand, 1e-12));
  }
}

TEST_CASE("quasifree three-particle marginal keeps trace and positivity") {
  Grid g(1, 8, 4.0);
  OrbitalSet s = plane_wave_family(g, 3);
  DensityMatrix q3 = quasifree_marginal(s.gamma1(), 3, 3);
  CHECK(close(q3.trace(), cplx(1.0, 0.0), 1e-10));
  CHECK(q3.hermiticity_defect() < 1e-12);
  CHECK(q3.min_eigenvalue() > -1e-10);
}

TEST_CASE("localized family: envelope decay, overlaps, Pauli") {
  Grid g(1, 256, 16.0);
  OrbitalSet s = localized_family(g, 4.0, 0.5, 1.0);
  CHECK(s.modes() == 17);
  CHECK(s.orthonormality_defect() < 1e-12);
  CHECK_NOTHROW(s.validate());

  // raw Gaussian overlaps die below 1e-6 once centers sit 6*eps*sigma apart
  const double w = 0.5;
  Eigen::VectorXcd a = gaussian_orbital(g, 0.0, w);
  Eigen::VectorXcd b = gaussian_orbital(g, 3.0, w);
  cplx ov = g.spacing() * a.dot(b);
  CHECK(std::abs(ov) < 1e-6);
  CHECK(std::abs(ov) > 1e-12);  // small but not structurally zero

  // envelope too wide for the box
  CHECK_THROWS_AS(localized_family(g, 4.0, 4.0, 4.0), ResolutionError);
}

TEST_CASE("shifted family carries beta = 1/2 and stays Pauli-bounded") {
  Grid g(1, 512, 32.0);
  OrbitalSet base = localized_family(g, 3.2, 0.5, 1.0);
  CHECK(base.modes() == 13);

  // raw superposition norm fixes the normalization at 1/2
  const double e = 16.0;
  const int shift = int(e / g.spacing());
  Eigen::VectorXcd raw(g.points);
  for (int m = 0; m < g.points; ++m)
    raw(m) = base.phi(m, 0) + base.phi(((m - shift) % g.points + g.points) % g.points, 0);
  double beta = 1.0 / (g.spacing() * raw.squaredNorm());
  CHECK(close(beta, 0.5, 1e-6));

  OrbitalSet sh = shifted_family(base, e);
  CHECK_NOTHROW(sh.validate());
  DensityMatrix g1 = sh.gamma1();
  CHECK(close(g1.trace(), cplx(1.0, 0.0), 1e-12));
  CHECK(g1.max_eigenvalue() <= 1.0 / 13.0 + 1e-12);

  CHECK_THROWS_AS(shifted_family(base, 16.03), StructuralError);
}

TEST_CASE("random band-limited Slater states are reproducible and band-limited") {
  Grid g(1, 64, 8.0);
  OrbitalSet s = random_slater(g, 6, 12, 2024);
  CHECK(s.orthonormality_defect() < 1e-12);
  OrbitalSet again = random_slater(g, 6, 12, 2024);
  CHECK((s.phi - again.phi).cwiseAbs().maxCoeff() == 0.0);

  std::vector<cplx> col(g.points);
  double out_of_band = 0.0;
  for (int j = 0; j < s.modes(); ++j) {
    for (int m = 0; m < g.points; ++m) col[m] = s.phi(m, j);
    centered_fft_axis(col.data(), {g.points}, 0, true, g.spacing(), g.extent);
    for (int m = 0; m < g.points; ++m)
      if (std::abs(m - 32) > 12) out_of_band = std::max(out_of_band, std::abs(col[m]));
  }
  CHECK(out_of_band < 1e-12);

  CHECK_THROWS_AS(random_slater(g, 30, 12, 1), ArityError);
  CHECK_THROWS_AS(random_slater(g, 4, 40, 1), ResolutionError);
}

TEST_CASE("momentum density of the plane-wave shell is the filled-band plateau") {
  Grid g(1, 128, 16.0);
  const int N = 33;
  OrbitalSet s = plane_wave_family(g, N);
  const double eps = 0.2;
  Field f = momentum_density(s, eps);
  // occupied modes all carry L/(pi N eps)
  const double plateau = 16.0 / (M_PI * N * eps);
  CHECK(close(f.values[64].real(), plateau, 1e-12));
  CHECK(close(f.values[64 + 16].real(), plateau, 1e-12));
  CHECK(close(f.values[64 + 17].real(), 0.0, 1e-15));
  for (double nu : {eps / 4.0, eps, 4.0 * eps}) {
    Field fn = momentum_density(s, nu);
    CHECK(close(integral(fn), cplx(1.0, 0.0), 1e-12));
    double mn = 0.0;
    for (auto& v : fn.values) mn = std::min(mn, v.real());
    CHECK(mn > -1e-12);
  }
}

TEST_CASE("momentum density of a Gaussian orbital has reciprocal variance") {
  Grid g(1, 256, 16.0);
  const double w = 1.5;
  OrbitalSet s{g, Eigen::MatrixXcd(g.points, 1), {1.0}};
  s.phi.col(0) = gaussian_orbital(g, 0.0, w);
  Field f = momentum_density(s, 1.0);
  CHECK(close(integral(f), cplx(1.0, 0.0), 1e-12));
  double var = 0.0;
  for (int m = 0; m < f.grid.points; ++m) {
    double v = f.grid.coord(m);
    var += f.grid.spacing() * v * v * f.values[m].real();
  }
  // |psi|^2 ~ e^{-2x^2/w^2} has position variance w^2/4, momentum variance 1/w^2
  CHECK(close(var, 1.0 / (w * w), 1e-8));
}

TEST_CASE("fermi shells: counts and difference-set geometry") {
  using namespace exchange3d;
  CHECK(fermi_modes(1.0).size() == 7);
  CHECK(fermi_modes(2.2).size() == 33);
  CHECK(close(coulomb_exchange(fermi_modes(1.0)), 25.5 / 49.0, 1e-15));
  CHECK(close(smooth_exchange(fermi_modes(1.0), 0.0, 0.0, 0.3), 1.0, 1e-15));
  // q beyond the largest mode difference: empty sum exactly
  CHECK(single_mode_exchange(fermi_modes(2.2), {9, 0, 0}, 0.9, 0.3) == 0.0);
  CHECK(single_mode_exchange(fermi_modes(2.2), {1, 0, 0}, 0.9, 0.3) > 0.0);
}

TEST_CASE("exchange pairings scale as 1/N (smooth) and N^{-2/3} (coulomb)") {
  using namespace exchange3d;
  // kernel width 1.6 keeps the shell-surface deficit subdominant
  std::vector<double> radii = {3.6, 4.8, 6.4, 8.4, 11.0};
  std::vector<double> Ns, ex, cl, fd;
  for (double r : radii) {
    auto modes = fermi_modes(r);
    const double N = double(modes.size());
    const double eps = std::pow(N, -1.0 / 3.0);
    Ns.push_back(N);
    ex.push_back(smooth_exchange(modes, 1.6, 0.9, eps));
    cl.push_back(coulomb_exchange(modes));
    fd.push_back(factorization_defect(modes, 1.6, 0.9, eps));
  }
  CHECK(Ns.front() > 100);
  CHECK(Ns.back() > 2000);
  LineFit s = fit_loglog(Ns, ex);
  CHECK(close(s.slope, -1.0, 0.1));
  CHECK(s.r2 >= 0.98);
  LineFit c = fit_loglog(Ns, cl);
  CHECK(close(c.slope, -2.0 / 3.0, 0.1));
  CHECK(c.r2 >= 0.98);
  LineFit f = fit_loglog(Ns, fd);
  CHECK(f.slope <= -0.9);
}

TEST_CASE("line fits recover exact laws") {
  LineFit a = fit_line({1.0, 2.0, 3.0, 4.0}, {3.0, 5.0, 7.0, 9.0});
  CHECK(close(a.slope, 2.0, 1e-13));
  CHECK(close(a.intercept, 1.0, 1e-13));
  CHECK(close(a.r2, 1.0, 1e-13));
  LineFit b = fit_loglog({1.0, 2.0, 4.0, 8.0}, {3.0, 0.75, 0.1875, 0.046875});
  CHECK(close(b.slope, -2.0, 1e-13));
  CHECK_THROWS_AS(fit_loglog({-1.0, 2.0}, {1.0, 1.0}), PreconditionError);
}
