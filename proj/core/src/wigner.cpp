#include "mflab/wigner.hpp"

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

void check_phase_space_budget(const Grid& g, int rank) {
  double entries = std::pow(double(g.points), 2.0 * rank);
  if (entries > double(kFieldBudget))
    throw CapacityError("wigner: phase-space array exceeds the entry budget");
}

}  // namespace

double& WignerFunction::at(int m, int l) {
  if (rank != 1) throw ArityError("wigner at(): rank-1 accessor");
  return values[long(m) * xgrid.points + l];
}

double WignerFunction::at(int m, int l) const {
  if (rank != 1) throw ArityError("wigner at(): rank-1 accessor");
  return values[long(m) * xgrid.points + l];
}

double WignerFunction::mass() const {
  double cell = std::pow(xgrid.spacing() * dv(), rank);
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * cell;
}

double WignerFunction::min_value() const {
  double m = values.empty() ? 0.0 : values[0];
  for (double v : values) m = std::min(m, v);
  return m;
}

double WignerFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

WignerFunction wigner(const DensityMatrix& gamma, double epsilon) {
  const Grid& g = gamma.grid;
  if (!(epsilon > 0.0)) throw StructuralError("wigner: scale must be positive");
  if (epsilon < g.spacing())
    throw ResolutionError("wigner: scale under the lattice spacing");
  if (gamma.rank > 2) throw ArityError("wigner: rank 1 or 2 only");
  check_phase_space_budget(g, gamma.rank);

  const int n = g.points;
  const double hy = 2.0 * g.spacing() / epsilon;
  const double Ly = 0.5 * n * hy;
  const int k = gamma.rank;

  WignerFunction W{g, epsilon, k, std::vector<double>(ipow(n, 2 * k), 0.0), 0.0};
  std::vector<cplx> buf(W.values.size());
  if (k == 1) {
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j) {
        const int c = j - n / 2;
        buf[long(m) * n + j] = gamma.kernel(wrap(m + c, n), wrap(m - c, n));
      }
    centered_fft_axis(buf.data(), {n, n}, 1, true, hy, Ly);
  } else {
    for (int m1 = 0; m1 < n; ++m1)
      for (int m2 = 0; m2 < n; ++m2)
        for (int j1 = 0; j1 < n; ++j1)
          for (int j2 = 0; j2 < n; ++j2) {
            const int c1 = j1 - n / 2, c2 = j2 - n / 2;
            const long row = long(wrap(m1 + c1, n)) * n + wrap(m2 + c2, n);
            const long col = long(wrap(m1 - c1, n)) * n + wrap(m2 - c2, n);
            buf[((long(m1) * n + m2) * n + j1) * n + j2] = gamma.kernel(row, col);
          }
    centered_fft_axis(buf.data(), {n, n, n, n}, 2, true, hy, Ly);
    centered_fft_axis(buf.data(), {n, n, n, n}, 3, true, hy, Ly);
  }
  const double scale = std::pow(2.0 * M_PI, -k);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    W.values[i] = buf[i].real() * scale;
    W.imag_residue = std::max(W.imag_residue, std::abs(buf[i].imag()) * scale);
  }
  return W;
}

DensityMatrix inverse_wigner(const WignerFunction& W) {
  if (W.rank != 1) throw ArityError("inverse_wigner: rank 1 only");
  const Grid& g = W.xgrid;
  const int n = g.points;
  const double h = g.spacing();
  const double L = g.extent;
  const double hy = 2.0 * h / W.epsilon;
  const double Ly = 0.5 * n * hy;

  DensityMatrix gamma(g, 1);
  std::vector<cplx> buf(W.values.begin(), W.values.end());

  // even anti-diagonals: invert the defining transform row by row
  centered_fft_axis(buf.data(), {n, n}, 1, false, hy, Ly);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j) {
      const int c = j - n / 2;
      gamma.kernel(wrap(m + c, n), wrap(m - c, n)) = 2.0 * M_PI * buf[long(m) * n + j];
    }

  // odd anti-diagonals: centers at x + h/2 by trigonometric interpolation
  buf.assign(W.values.begin(), W.values.end());
  centered_fft_axis(buf.data(), {n, n}, 0, true, h, L);
  for (int k = 0; k < n; ++k) {
    const cplx ph = std::exp(cplx(0.0, 0.5 * g.dual_coord(k) * h));
    for (int l = 0; l < n; ++l) buf[long(k) * n + l] *= ph;
  }
  centered_fft_axis(buf.data(), {n, n}, 0, false, h, L);
  for (int M = 0; M < n; ++M)
    for (int l = 0; l < n; ++l) {
      const double vl = (l - n / 2) * W.dv();
      buf[long(M) * n + l] *= std::exp(cplx(0.0, 0.5 * vl * hy));
    }
  centered_fft_axis(buf.data(), {n, n}, 1, false, hy, Ly);
  for (int M = 0; M < n; ++M)
    for (int j = 0; j < n; ++j) {
      const int c = j - n / 2;
      gamma.kernel(wrap(M + c + 1, n), wrap(M - c, n)) = 2.0 * M_PI * buf[long(M) * n + j];
    }
  return gamma;
}

WignerFunction husimi(const WignerFunction& W, double delta1, double delta2) {
  if (W.rank != 1) throw ArityError("husimi: rank 1 only");
  const Grid& g = W.xgrid;
  const Grid vg = W.vgrid();
  const int n = g.points;
  if (delta1 < 2.0 * g.spacing() || delta2 < 2.0 * vg.spacing())
    throw ResolutionError("husimi: smoothing width under two lattice spacings");

  std::vector<cplx> buf(W.values.begin(), W.values.end());
  centered_fft_axis(buf.data(), {n, n}, 0, true, g.spacing(), g.extent);
  for (int k = 0; k < n; ++k) {
    const double kk = g.dual_coord(k);
    const double mult = std::exp(-0.25 * delta1 * delta1 * kk * kk);
    for (int l = 0; l < n; ++l) buf[long(k) * n + l] *= mult;
  }
  centered_fft_axis(buf.data(), {n, n}, 0, false, g.spacing(), g.extent);
  centered_fft_axis(buf.data(), {n, n}, 1, true, vg.spacing(), vg.extent);
  for (int j = 0; j < n; ++j) {
    const double eta = vg.dual_coord(j);
    const double mult = std::exp(-0.25 * delta2 * delta2 * eta * eta);
    for (int m = 0; m < n; ++m) buf[long(m) * n + j] *= mult;
  }
  centered_fft_axis(buf.data(), {n, n}, 1, false, vg.spacing(), vg.extent);

  WignerFunction H = W;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    H.values[i] = buf[i].real();
    H.imag_residue = std::max(H.imag_residue, std::abs(buf[i].imag()));
  }
  return H;
}

WignerFunction wigner_marginal(const WignerFunction& W, int k) {
  if (k < 1 || k > W.rank) throw ArityError("wigner_marginal: k must be 1..rank");
  if (k == W.rank) return W;
  // only rank 2 -> 1 arises in practice
  const int n = W.xgrid.points;
  const double cell = W.xgrid.spacing() * W.dv();
  WignerFunction out{W.xgrid, W.epsilon, 1, std::vector<double>(long(n) * n, 0.0), W.imag_residue};
  for (int m1 = 0; m1 < n; ++m1)
    for (int l1 = 0; l1 < n; ++l1) {
      double acc = 0.0;
      for (int m2 = 0; m2 < n; ++m2)
        for (int l2 = 0; l2 < n; ++l2)
          acc += W.values[((long(m1) * n + m2) * n + l1) * n + l2];
      out.values[long(m1) * n + l1] = acc * cell;
    }
  return out;
}

double pair_observable(const WignerFunction& W,
                       const std::function<double(double, double)>& J) {
  if (W.rank != 1) throw ArityError("pair_observable: rank 1 only");
  const int n = W.xgrid.points;
  double acc = 0.0;
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      acc += J(W.xgrid.coord(m), (l - n / 2) * W.dv()) * W.at(m, l);
  return acc * W.xgrid.spacing() * W.dv();
}

std::vector<double> x_derivative(const WignerFunction& W) {
  if (W.rank != 1) throw ArityError("x_derivative: rank 1 only");
  const Grid& g = W.xgrid;
  const int n = g.points;
  std::vector<cplx> buf(W.values.begin(), W.values.end());
  centered_fft_axis(buf.data(), {n, n}, 0, true, g.spacing(), g.extent);
  for (int k = 0; k < n; ++k) {
    const cplx ik(0.0, g.dual_coord(k));
    for (int l = 0; l < n; ++l) buf[long(k) * n + l] *= ik;
  }
  centered_fft_axis(buf.data(), {n, n}, 0, false, g.spacing(), g.extent);
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
  return out;
}

}  // namespace mflab
