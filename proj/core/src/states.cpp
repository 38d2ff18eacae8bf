#include "mflab/states.hpp"

#include <cmath>

#include "mflab/errors.hpp"
#include "mflab/fft.hpp"

namespace mflab {

std::pair<DensityMatrix, DensityMatrix> slater_marginals(const OrbitalSet& s) {
  for (double a : s.occ)
    if (std::abs(a - 1.0) > 1e-12)
      throw PreconditionError("slater_marginals: occupations must all equal 1");
  const int N = s.particles();
  if (N < 2) throw ArityError("slater_marginals: rank-2 marginal needs N >= 2");
  DensityMatrix g1 = s.gamma1();
  const int n = s.grid.points;
  DensityMatrix g2(s.grid, 2);
  const double pref = double(N) / (N - 1.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const long row = long(a) * n + b;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          g2.kernel(row, long(c) * n + d) =
              pref * (g1.kernel(a, c) * g1.kernel(b, d) - g1.kernel(a, d) * g1.kernel(b, c));
    }
  return {std::move(g1), std::move(g2)};
}

DensityMatrix quasifree_marginal(const DensityMatrix& gamma1, int k, int N) {
  if (gamma1.rank != 1) throw ArityError("quasifree_marginal: input must be rank 1");
  if (k < 1 || k > 3) throw ArityError("quasifree_marginal: k must be 1..3");
  if (k > N) throw ArityError("quasifree_marginal: k exceeds the particle number");
  if (gamma1.max_eigenvalue() > 1.0 / N + 1e-12)
    throw PauliBoundError("quasifree_marginal: gamma1 exceeds 1/N");
  if (k == 1) return gamma1;

  double pref = 1.0;
  for (int i = 0; i < k; ++i) pref *= double(N) / (N - i);
  const int n = gamma1.grid.points;
  const auto& g = gamma1.kernel;
  DensityMatrix out(gamma1.grid, k);
  if (k == 2) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const long row = long(a) * n + b;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            out.kernel(row, long(c) * n + d) =
                pref * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
      }
    return out;
  }
  // k = 3: Leibniz expansion of the 3x3 determinant
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const long row = (long(a) * n + b) * n + c;
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e)
            for (int f = 0; f < n; ++f) {
              cplx det = g(a, d) * (g(b, e) * g(c, f) - g(b, f) * g(c, e)) -
                         g(a, e) * (g(b, d) * g(c, f) - g(b, f) * g(c, d)) +
                         g(a, f) * (g(b, d) * g(c, e) - g(b, e) * g(c, d));
              out.kernel(row, (long(d) * n + e) * n + f) = pref * det;
            }
      }
  return out;
}

Field momentum_density(const OrbitalSet& s, double nu) {
  if (!(nu > 0.0)) throw StructuralError("momentum_density: scale must be positive");
  const Grid& g = s.grid;
  const int n = g.points;
  const int N = s.particles();
  std::vector<double> rho(n, 0.0);
  std::vector<cplx> col(n);
  for (int j = 0; j < s.modes(); ++j) {
    for (int m = 0; m < n; ++m) col[m] = s.phi(m, j);
    centered_fft_axis(col.data(), {n}, 0, true, g.spacing(), g.extent);
    for (int m = 0; m < n; ++m)
      rho[m] += (s.occ[j] / N) * std::norm(col[m]) / (2.0 * M_PI);
  }
  // v-grid: coords nu * kappa_m, spacing nu * dual_spacing
  Grid vg(1, n, nu * g.dual_extent());
  Field f = make_field(vg, 1, Space::position);
  for (int m = 0; m < n; ++m) f.values[m] = rho[m] / nu;
  return f;
}

}  // namespace mflab
