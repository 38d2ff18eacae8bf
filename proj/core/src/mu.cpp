#include "mflab/mu.hpp"

#include <cmath>

#include "mflab/errors.hpp"
#include "mflab/fft.hpp"
#include "mflab/field.hpp"

namespace mflab {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

cplx& MuFunction::at(int i, int j) {
  if (rank != 1) throw ArityError("mu at(): rank-1 accessor");
  return values[long(i) * xgrid.points + j];
}

cplx MuFunction::at(int i, int j) const {
  if (rank != 1) throw ArityError("mu at(): rank-1 accessor");
  return values[long(i) * xgrid.points + j];
}

cplx MuFunction::at00() const {
  const int n = xgrid.points;
  long idx = 0;
  for (int s = 0; s < 2 * rank; ++s) idx = idx * n + n / 2;
  return values[idx];
}

double MuFunction::max_abs() const {
  double m = 0.0;
  for (const cplx& v : values) m = std::max(m, std::abs(v));
  return m;
}

MuFunction mu_from_density(const DensityMatrix& gamma, double epsilon) {
  const Grid& g = gamma.grid;
  if (!(epsilon > 0.0)) throw StructuralError("mu: scale must be positive");
  if (gamma.rank > 2) throw ArityError("mu: rank 1 or 2 only");
  const int n = g.points;
  const int k = gamma.rank;
  if (std::pow(double(n), 2.0 * k) > double(kFieldBudget))
    throw CapacityError("mu: array exceeds the entry budget");

  MuFunction mu{g, epsilon, k, std::vector<cplx>(ipow(n, 2 * k))};
  if (k == 1) {
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j) {
        const int c = j - n / 2;
        mu.values[long(m) * n + j] = gamma.kernel(wrap(m - c, n), wrap(m + c, n));
      }
    centered_fft_axis(mu.values.data(), {n, n}, 0, true, g.spacing(), g.extent);
  } else {
    for (int m1 = 0; m1 < n; ++m1)
      for (int m2 = 0; m2 < n; ++m2)
        for (int j1 = 0; j1 < n; ++j1)
          for (int j2 = 0; j2 < n; ++j2) {
            const int c1 = j1 - n / 2, c2 = j2 - n / 2;
            const long row = long(wrap(m1 - c1, n)) * n + wrap(m2 - c2, n);
            const long col = long(wrap(m1 + c1, n)) * n + wrap(m2 + c2, n);
            mu.values[((long(m1) * n + m2) * n + j1) * n + j2] = gamma.kernel(row, col);
          }
    centered_fft_axis(mu.values.data(), {n, n, n, n}, 0, true, g.spacing(), g.extent);
    centered_fft_axis(mu.values.data(), {n, n, n, n}, 1, true, g.spacing(), g.extent);
  }
  return mu;
}

MuFunction mu_from_wigner(const WignerFunction& W) {
  const Grid& g = W.xgrid;
  const Grid vg = W.vgrid();
  const int n = g.points;
  MuFunction mu{g, W.epsilon, W.rank, std::vector<cplx>(W.values.begin(), W.values.end())};
  if (W.rank == 1) {
    centered_fft_axis(mu.values.data(), {n, n}, 0, true, g.spacing(), g.extent);
    centered_fft_axis(mu.values.data(), {n, n}, 1, true, vg.spacing(), vg.extent);
  } else {
    const std::vector<int> shape{n, n, n, n};
    centered_fft_axis(mu.values.data(), shape, 0, true, g.spacing(), g.extent);
    centered_fft_axis(mu.values.data(), shape, 1, true, g.spacing(), g.extent);
    centered_fft_axis(mu.values.data(), shape, 2, true, vg.spacing(), vg.extent);
    centered_fft_axis(mu.values.data(), shape, 3, true, vg.spacing(), vg.extent);
  }
  return mu;
}

WignerFunction wigner_from_mu(const MuFunction& mu) {
  const Grid& g = mu.xgrid;
  const Grid vg(1, g.points, 0.5 * mu.epsilon * g.dual_extent());
  const int n = g.points;
  std::vector<cplx> buf = mu.values;
  if (mu.rank == 1) {
    centered_fft_axis(buf.data(), {n, n}, 0, false, g.spacing(), g.extent);
    centered_fft_axis(buf.data(), {n, n}, 1, false, vg.spacing(), vg.extent);
  } else {
    const std::vector<int> shape{n, n, n, n};
    centered_fft_axis(buf.data(), shape, 0, false, g.spacing(), g.extent);
    centered_fft_axis(buf.data(), shape, 1, false, g.spacing(), g.extent);
    centered_fft_axis(buf.data(), shape, 2, false, vg.spacing(), vg.extent);
    centered_fft_axis(buf.data(), shape, 3, false, vg.spacing(), vg.extent);
  }
  WignerFunction W{g, mu.epsilon, mu.rank, std::vector<double>(buf.size()), 0.0};
  for (std::size_t i = 0; i < buf.size(); ++i) {
    W.values[i] = buf[i].real();
    W.imag_residue = std::max(W.imag_residue, std::abs(buf[i].imag()));
  }
  return W;
}

MuFunction mu_restrict(const MuFunction& mu, int k) {
  if (k < 1 || k > mu.rank) throw ArityError("mu_restrict: k must be 1..rank");
  if (k == mu.rank) return mu;
  const int n = mu.xgrid.points;
  // rank 2 -> 1: fix the second xi and eta slots at the zero bin
  MuFunction out{mu.xgrid, mu.epsilon, 1, std::vector<cplx>(long(n) * n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.values[long(i) * n + j] = mu.values[((long(i) * n + n / 2) * n + j) * n + n / 2];
  return out;
}

}  // namespace mflab
