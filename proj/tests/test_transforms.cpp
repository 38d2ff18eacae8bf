#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mflab/errors.hpp>
#include <mflab/families.hpp>
#include <mflab/fit.hpp>
#include <mflab/mu.hpp>
#include <mflab/quadrature.hpp>
#include <mflab/states.hpp>
#include <mflab/wigner.hpp>

#include <cmath>
#include <complex>

using namespace mflab;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

OrbitalSet gaussian_packet(const Grid& g, double s) {
  OrbitalSet st{g, Eigen::MatrixXcd(g.points, 1), {1.0}};
  for (int m = 0; m < g.points; ++m) {
    double x = g.coord(m);
    st.phi(m, 0) = std::exp(-x * x / (2.0 * s * s));
  }
  st.phi.col(0) /= std::sqrt(g.spacing()) * st.phi.col(0).norm();
  return st;
}

// free kinetic flow: spectral phase e^{-i eps k^2 t / 2} per orbital
OrbitalSet free_evolve(const OrbitalSet& s, double eps, double t) {
  OrbitalSet out = s;
  const Grid& g = s.grid;
  std::vector<cplx> col(g.points);
  for (int j = 0; j < s.modes(); ++j) {
    for (int m = 0; m < g.points; ++m) col[m] = s.phi(m, j);
    centered_fft_axis(col.data(), {g.points}, 0, true, g.spacing(), g.extent);
    for (int k = 0; k < g.points; ++k) {
      double kk = g.dual_coord(k);
      col[k] *= std::exp(cplx(0.0, -0.5 * eps * kk * kk * t));
    }
    centered_fft_axis(col.data(), {g.points}, 0, false, g.spacing(), g.extent);
    for (int m = 0; m < g.points; ++m) out.phi(m, j) = col[m];
  }
  return out;
}

}  // namespace

TEST_CASE("Wigner transform of a Gaussian packet matches the closed form") {
  Grid g(1, 128, 16.0);
  const double s = 1.0, eps = 0.5;
  const int n = g.points;
  WignerFunction W = wigner(gaussian_packet(g, s).gamma1(), eps);
  CHECK(W.imag_residue < 1e-12);
  CHECK(close(W.mass(), 1.0, 1e-12));

  // independent oracle: direct summation of the periodized analytic kernel
  auto psi = [&](double x) {
    double a = 0.0;
    for (int p = -1; p <= 1; ++p) {
      double u = x + 2.0 * p * g.extent;
      a += std::exp(-u * u / (2.0 * s * s));
    }
    return a / std::pow(M_PI * s * s, 0.25);
  };
  const double hy = 2.0 * g.spacing() / eps;
  double supOracle = 0.0;
  for (int m = 0; m < n; ++m) {
    double x = g.coord(m);
    for (int l = 0; l < n; ++l) {
      double v = (l - n / 2) * W.dv();
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        double y = (j - n / 2) * hy;
        acc += psi(x + 0.5 * eps * y) * psi(x - 0.5 * eps * y) * std::cos(v * y);
      }
      supOracle = std::max(supOracle, std::abs(W.at(m, l) - hy * acc / (2.0 * M_PI)));
    }
  }
  CHECK(supOracle < 1e-13);

  // the continuum closed form holds in the bulk; the packet and its 2L image
  // interfere at |x| = L, one alternating fringe column per velocity bin
  double supBulk = 0.0;
  for (int m = n / 4; m < 3 * n / 4; ++m)
    for (int l = 0; l < n; ++l) {
      double x = g.coord(m), v = (l - n / 2) * W.dv();
      double expect = std::exp(-x * x / (s * s) - s * s * v * v / (eps * eps)) / (M_PI * eps);
      supBulk = std::max(supBulk, std::abs(W.at(m, l) - expect));
    }
  CHECK(supBulk < 1e-10);
  double supFringe = 0.0;
  for (int l = 0; l < n; ++l) {
    double sign = (l - n / 2) % 2 == 0 ? 1.0 : -1.0;
    supFringe = std::max(supFringe, std::abs(W.at(0, l) - sign * W.at(n / 2, l)));
  }
  CHECK(supFringe < 1e-13);

  CHECK_THROWS_AS(wigner(gaussian_packet(g, s).gamma1(), 0.5 * g.spacing()), ResolutionError);
}

TEST_CASE("Wigner mass equals the trace for random Slater states") {
  Grid g(1, 64, 8.0);
  for (unsigned seed : {1u, 2u, 3u}) {
    OrbitalSet s = random_slater(g, 5, 15, seed);
    WignerFunction W = wigner(s.gamma1(), 0.5);
    CHECK(close(W.mass(), 1.0, 1e-12));
    CHECK(W.imag_residue < 1e-10);
  }
}

TEST_CASE("plane-wave shells approach the phase-space box weak limit") {
  Grid g(1, 1024, M_PI);
  const double c = 0.5;
  auto fs = std::vector<std::function<double(double)>>{
      [](double v) { return std::exp(-v * v); },
      [](double v) { return 1.0 / (1.0 + v * v); },
      [](double v) { return std::cos(v); }};
  for (const auto& f : fs) {
    double limit = adaptive_integrate(f, -c, c);
    std::vector<double> Ns, errs;
    for (int N : {17, 33, 65, 129}) {
      const double eps = 2.0 * c / ((N - 1) * g.dual_spacing());
      WignerFunction W = wigner(plane_wave_family(g, N).gamma1(), eps);
      double pairing = pair_observable(W, [&](double, double v) { return f(v); });
      Ns.push_back(N);
      errs.push_back(std::abs(pairing - limit));
    }
    LineFit fit = fit_loglog(Ns, errs);
    CHECK(fit.slope <= -0.9);
  }
}

TEST_CASE("inverse Wigner round-trips band-limited kernels") {
  Grid g(1, 64, 8.0);
  OrbitalSet s = random_slater(g, 4, 15, 11);
  DensityMatrix gamma = s.gamma1();
  WignerFunction W = wigner(gamma, 0.5);
  DensityMatrix back = inverse_wigner(W);
  CHECK((back.kernel - gamma.kernel).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(back.hermiticity_defect() < 1e-12);

  WignerFunction W2 = wigner(back, 0.5);
  double sup = 0.0;
  for (long i = 0; i < W.size(); ++i)
    sup = std::max(sup, std::abs(W.values[i] - W2.values[i]));
  CHECK(sup < 1e-10);
}

TEST_CASE("velocity marginal of W recovers the particle density") {
  Grid g(1, 64, 8.0);
  DensityMatrix gamma = random_slater(g, 3, 14, 5).gamma1();
  WignerFunction W = wigner(gamma, 0.5);
  const int n = g.points;
  double sup = 0.0;
  for (int m = 0; m < n; ++m) {
    double dens = 0.0;
    for (int l = 0; l < n; ++l) dens += W.dv() * W.at(m, l);
    sup = std::max(sup, std::abs(dens - gamma.kernel(m, m).real()));
  }
  CHECK(sup < 1e-12);
}

TEST_CASE("Gaussian packet kernel is recovered with hermitian symmetry") {
  Grid g(1, 128, 16.0);
  DensityMatrix gamma = gaussian_packet(g, 1.0).gamma1();
  DensityMatrix back = inverse_wigner(wigner(gamma, 0.5));
  CHECK((back.kernel - gamma.kernel).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(back.hermiticity_defect() < 1e-12);
}

TEST_CASE("mu is the unit-modulus-bounded lattice symbol") {
  Grid g(1, 64, 8.0);
  for (unsigned seed = 0; seed < 20; ++seed) {
    int N = 1 + int(seed % 8);
    OrbitalSet s = random_slater(g, N, 15, 100 + seed);
    MuFunction mu = mu_from_density(s.gamma1(), 0.5);
    CHECK(std::abs(mu.at00() - cplx(1.0, 0.0)) < 1e-12);
    CHECK(mu.max_abs() <= 1.0 + 1e-10);
  }
}

TEST_CASE("mu of the free flow shears eta by t xi exactly") {
  Grid g(1, 64, 2.0 * M_PI);
  const double eps = 0.5;
  OrbitalSet s = random_slater(g, 3, 15, 9);
  MuFunction mu0 = mu_from_density(s.gamma1(), eps);
  // t chosen so dk * t is one eta step
  const double t = 0.5 * M_PI;
  MuFunction mut = mu_from_density(free_evolve(s, eps, t).gamma1(), eps);
  const int n = g.points;
  double sup = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int js = (((j + (i - n / 2)) % n) + n) % n;
      sup = std::max(sup, std::abs(mut.at(i, j) - mu0.at(i, js)));
    }
  CHECK(sup < 1e-10);
}

TEST_CASE("gamma-to-mu commutes with the Wigner route") {
  Grid g(1, 64, 8.0);
  DensityMatrix gamma = random_slater(g, 4, 15, 21).gamma1();
  const double eps = 0.5;
  MuFunction direct = mu_from_density(gamma, eps);
  MuFunction via = mu_from_wigner(wigner(gamma, eps));
  double sup = 0.0;
  for (long i = 0; i < direct.size(); ++i)
    sup = std::max(sup, std::abs(direct.values[i] - via.values[i]));
  CHECK(sup < 1e-10);

  WignerFunction W = wigner(gamma, eps);
  WignerFunction back = wigner_from_mu(mu_from_wigner(W));
  sup = 0.0;
  for (long i = 0; i < W.size(); ++i)
    sup = std::max(sup, std::abs(W.values[i] - back.values[i]));
  CHECK(sup < 1e-12);
}

TEST_CASE("both marginal paths collapse the Slater pair state to gamma1") {
  Grid g(1, 32, 8.0);
  OrbitalSet s = random_slater(g, 3, 7, 33);
  auto [g1, g2] = slater_marginals(s);
  const double eps = 0.6;
  WignerFunction W2 = wigner(g2, eps);
  CHECK(close(W2.mass(), 1.0, 1e-8));

  WignerFunction viaIntegration = wigner_marginal(W2, 1);
  WignerFunction viaRestriction = wigner_from_mu(mu_restrict(mu_from_wigner(W2), 1));
  WignerFunction direct = wigner(g1, eps);
  CHECK(close(viaIntegration.mass(), 1.0, 1e-8));
  double supPaths = 0.0, supDirect = 0.0;
  for (long i = 0; i < direct.size(); ++i) {
    supPaths = std::max(supPaths, std::abs(viaIntegration.values[i] - viaRestriction.values[i]));
    supDirect = std::max(supDirect, std::abs(viaIntegration.values[i] - direct.values[i]));
  }
  CHECK(supPaths < 1e-10);
  CHECK(supDirect < 1e-10);

  CHECK_THROWS_AS(wigner_marginal(W2, 3), ArityError);
}

TEST_CASE("marginal of a synthetic product state returns the first factor") {
  Grid g(1, 32, 8.0);
  const double eps = 0.6;
  WignerFunction Wa = wigner(random_slater(g, 2, 7, 1).gamma1(), eps);
  WignerFunction Wb = wigner(random_slater(g, 3, 7, 2).gamma1(), eps);
  const int n = g.points;
  WignerFunction prod{g, eps, 2, std::vector<double>(long(n) * n * n * n), 0.0};
  for (int m1 = 0; m1 < n; ++m1)
    for (int m2 = 0; m2 < n; ++m2)
      for (int l1 = 0; l1 < n; ++l1)
        for (int l2 = 0; l2 < n; ++l2)
          prod.values[((long(m1) * n + m2) * n + l1) * n + l2] =
              Wa.at(m1, l1) * Wb.at(m2, l2);
  WignerFunction first = wigner_marginal(prod, 1);
  double sup = 0.0;
  for (long i = 0; i < first.size(); ++i)
    sup = std::max(sup, std::abs(first.values[i] - Wa.values[i]));
  CHECK(sup < 1e-12);
}

TEST_CASE("Husimi positivity holds exactly on and above the threshold") {
  Grid g(1, 64, 8.0);
  const double eps = 0.5;
  const double d1s[5] = {0.5, 0.6, 0.8, 1.0, 1.2};
  const double d2s[5] = {0.3, 0.45, 0.55, 0.8, 1.2};
  for (unsigned seed = 0; seed < 5; ++seed) {
    WignerFunction W = wigner(random_slater(g, 4, 15, 300 + seed).gamma1(), eps);
    for (double d1 : d1s)
      for (double d2 : d2s) {
        if (d1 * d2 < eps) continue;
        WignerFunction H = husimi(W, d1, d2);
        CHECK(H.min_value() >= -1e-9);
        CHECK(close(H.mass(), W.mass(), 1e-12));
      }
  }
  WignerFunction W = wigner(random_slater(g, 4, 15, 301).gamma1(), eps);
  CHECK_THROWS_AS(husimi(W, 0.1, 1.0), ResolutionError);
}

TEST_CASE("Husimi at the threshold equals the coherent-state overlap formula") {
  Grid g(1, 128, 16.0);
  const double s = 1.0, eps = 0.5, d1 = 0.8, d2 = eps / d1;
  WignerFunction H = husimi(wigner(gaussian_packet(g, s).gamma1(), eps), d1, d2);
  const int n = g.points;
  const double pref = s * d1 / (M_PI * eps * (s * s + d1 * d1));
  const double vper = n * H.dv();  // velocity window wraps, so the tails do too
  double sup = 0.0;
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l) {
      double x = g.coord(m), v = (l - n / 2) * H.dv();
      double expect = 0.0;
      for (int p = -1; p <= 1; ++p) {
        double u = v + p * vper;
        expect += pref * std::exp(-x * x / (s * s + d1 * d1)) *
                  std::exp(-u * u / (eps * eps / (s * s) + d2 * d2));
      }
      sup = std::max(sup, std::abs(H.at(m, l) - expect));
    }
  CHECK(sup < 1e-10);
}

TEST_CASE("positivity genuinely fails below the smoothing threshold") {
  Grid g(1, 64, 8.0);
  const double eps = 0.5;
  OrbitalSet two_hump{g, Eigen::MatrixXcd(g.points, 1), {1.0}};
  Eigen::VectorXcd a = gaussian_orbital(g, -1.5, 1.0);
  Eigen::VectorXcd b = gaussian_orbital(g, 1.5, 1.0);
  two_hump.phi.col(0) = a - b;
  two_hump.phi.col(0) /= std::sqrt(g.spacing()) * two_hump.phi.col(0).norm();
  WignerFunction W = wigner(two_hump.gamma1(), eps);
  // odd parity pins W(0,0) = -1/(pi eps)
  CHECK(close(W.at(32, 32), -1.0 / (M_PI * eps), 1e-8));
  WignerFunction H = husimi(W, 0.5, 0.25);  // d1 d2 = eps/4
  CHECK(H.min_value() < -1e-4);
}

TEST_CASE("freely streamed Wigner function satisfies the transport identity") {
  Grid g(1, 128, 16.0);
  const double eps = 0.5, dt = 2e-4;
  OrbitalSet s = gaussian_packet(g, 1.0);
  WignerFunction W0 = wigner(s.gamma1(), eps);
  WignerFunction Wp = wigner(free_evolve(s, eps, dt).gamma1(), eps);
  WignerFunction Wm = wigner(free_evolve(s, eps, -dt).gamma1(), eps);
  std::vector<double> dWdx = x_derivative(W0);
  const int n = g.points;
  double sup = 0.0;
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l) {
      double v = (l - n / 2) * W0.dv();
      double resid = (Wp.at(m, l) - Wm.at(m, l)) / (2.0 * dt) + v * dWdx[long(m) * n + l];
      sup = std::max(sup, std::abs(resid));
    }
  CHECK(sup < 1e-6);
}
