#include "mflab/nbody.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "mflab/errors.hpp"
#include "mflab/fft.hpp"
#include "mflab/mu.hpp"
#include "mflab/wigner.hpp"

namespace mflab {

namespace {

constexpr cplx kI{0.0, 1.0};

long lattice_entries(int n, int N) {
  long e = 1;
  for (int a = 0; a < N; ++a) {
    e *= n;
    if (e > kNBodyBudget) return e;
  }
  return e;
}

void check_budget(const Grid& g, int N) {
  if (N < 1) throw ArityError("nbody: at least one particle");
  if (lattice_entries(g.points, N) > kNBodyBudget)
    throw CapacityError("nbody: lattice entries exceed the 2^22 budget");
}

// slot bins of a flat row-major index, slot 0 slowest
void unpack(std::size_t idx, int n, int N, int* bins) {
  for (int a = N - 1; a >= 0; --a) {
    bins[a] = int(idx % n);
    idx /= n;
  }
}

std::size_t pack(const int* bins, int n, int N) {
  std::size_t idx = 0;
  for (int a = 0; a < N; ++a) idx = idx * n + bins[a];
  return idx;
}

// coupling * sum_{j<k} U_per(x_j - x_k) over the tensor lattice
std::vector<double> pair_potential(const Grid& g, int N, double coupling,
                                   const Potential& U) {
  const int n = g.points;
  const std::vector<double> uvals = U.on_grid(g);
  auto u_diff = [&](int a, int b) {
    return uvals[(a - b + n / 2 + 2 * n) % n];
  };
  std::vector<double> P(std::size_t(lattice_entries(n, N)), 0.0);
  std::vector<int> bins(N);
  for (std::size_t idx = 0; idx < P.size(); ++idx) {
    unpack(idx, n, N, bins.data());
    double s = 0.0;
    for (int j = 0; j < N; ++j)
      for (int k = j + 1; k < N; ++k) s += u_diff(bins[j], bins[k]);
    P[idx] = coupling * s;
  }
  return P;
}

void half_kinetic_all(std::vector<cplx>& v, const Grid& g, int N,
                      double epsilon, double dt) {
  const int n = g.points;
  const std::vector<int> shape(std::size_t(N), n);
  for (int a = 0; a < N; ++a)
    centered_fft_axis(v.data(), shape, a, true, g.spacing(), g.extent);
  std::vector<double> k2(n);
  for (int k = 0; k < n; ++k) {
    const double kk = g.dual_coord(k);
    k2[k] = kk * kk;
  }
  std::vector<int> bins(N);
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    unpack(idx, n, N, bins.data());
    double s = 0.0;
    for (int a = 0; a < N; ++a) s += k2[bins[a]];
    v[idx] *= std::exp(-kI * (epsilon * s * dt / 4.0));
  }
  for (int a = 0; a < N; ++a)
    centered_fft_axis(v.data(), shape, a, false, g.spacing(), g.extent);
}

struct StepPlan {
  long steps = 0;
};

StepPlan plan_steps(double t_final, double dt, int stride, const char* who) {
  if (dt == 0.0 || t_final / dt < 0.0)
    throw StructuralError(std::string(who) + ": step must advance toward t_final");
  if (stride < 1) throw StructuralError(std::string(who) + ": stride must be >= 1");
  const long steps = std::lround(t_final / dt);
  if (std::abs(double(steps) * dt - t_final) >
      1e-9 * std::max(1.0, std::abs(t_final)))
    throw StructuralError(std::string(who) + ": t_final is not a whole number of steps");
  if (steps % stride != 0)
    throw StructuralError(std::string(who) + ": stride must divide the step count");
  return {steps};
}

int atom_shift(double q, const Grid& g) {
  const double r = q / g.dual_spacing();
  const long b = std::lround(r);
  if (std::abs(r - double(b)) > 1e-9)
    throw StructuralError("nbody residual: spectral atom off the dual lattice");
  return int(b);
}

void stencil_guard(const NBodyTrajectory& traj) {
  if (traj.samples() < 3)
    throw PreconditionError("nbody residual: needs >= 3 samples for the time stencil");
  const int s = traj.samples() / 2;
  const double dtp = traj.times[s + 1] - traj.times[s];
  const double dtm = traj.times[s] - traj.times[s - 1];
  if (std::abs(dtp - dtm) > 1e-12 * std::max(1.0, std::abs(dtp)))
    throw PreconditionError("nbody residual: non-uniform samples around the stencil");
}

}  // namespace

double NBodyWavefunction::norm() const {
  double s = 0.0;
  for (const cplx& v : values) s += std::norm(v);
  return std::sqrt(s * std::pow(grid.spacing(), particles));
}

double NBodyWavefunction::antisymmetry_defect() const {
  const int n = grid.points;
  const int N = particles;
  if (N < 2) return 0.0;
  double defect = 0.0;
  std::vector<int> bins(N);
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    unpack(idx, n, N, bins.data());
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b) {
        std::swap(bins[a], bins[b]);
        const std::size_t sw = pack(bins.data(), n, N);
        std::swap(bins[a], bins[b]);
        defect = std::max(defect, std::abs(values[sw] + values[idx]));
      }
  }
  return defect;
}

void NBodyWavefunction::validate(double norm_tol) const {
  check_budget(grid, particles);
  if (long(values.size()) != lattice_entries(grid.points, particles))
    throw StructuralError("nbody: value array does not match grid^N");
  if (!(epsilon > 0.0)) throw StructuralError("nbody: scale must be positive");
  if (std::abs(norm() - 1.0) > norm_tol)
    throw StructuralError("nbody: wavefunction must be normalized");
}

NBodyWavefunction nbody_from_slater(const OrbitalSet& s, double epsilon,
                                    double coupling) {
  s.validate();
  const int N = s.modes();
  for (double a : s.occ)
    if (std::abs(a - 1.0) > 1e-12)
      throw StructuralError("nbody_from_slater: determinant state needs unit occupations");
  check_budget(s.grid, N);
  NBodyWavefunction psi;
  psi.grid = s.grid;
  psi.particles = N;
  psi.epsilon = epsilon;
  psi.coupling = coupling < 0.0 ? 1.0 / N : coupling;
  psi.values.resize(std::size_t(lattice_entries(s.grid.points, N)));
  double fact = 1.0;
  for (int j = 2; j <= N; ++j) fact *= j;
  const double scale = 1.0 / std::sqrt(fact);
  Eigen::MatrixXcd M(N, N);
  std::vector<int> bins(N);
  for (std::size_t idx = 0; idx < psi.values.size(); ++idx) {
    unpack(idx, s.grid.points, N, bins.data());
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) M(i, j) = s.phi(bins[i], j);
    psi.values[idx] = scale * M.determinant();
  }
  return psi;
}

NBodyTrajectory evolve_nbody(const NBodyWavefunction& psi0, const Potential& U,
                             double t_final, double dt, int stride) {
  psi0.validate();
  const Grid& g = psi0.grid;
  const int N = psi0.particles;
  const auto plan = plan_steps(t_final, dt, stride, "evolve_nbody");

  const std::vector<double> P = pair_potential(g, N, psi0.coupling, U);
  double pmax = 0.0;
  for (double p : P) pmax = std::max(pmax, std::abs(p));
  double cap = psi0.epsilon * g.spacing() * g.spacing() / std::numbers::pi;
  if (pmax > 1e-300) cap = std::min(cap, 0.1 * psi0.epsilon / pmax);
  if (std::abs(dt) > cap * (1.0 + 1e-12)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "evolve_nbody: dt %.3e above the stable bound %.3e",
                  std::abs(dt), cap);
    throw StepSizeError(msg);
  }
  std::vector<cplx> phase(P.size());
  for (std::size_t i = 0; i < P.size(); ++i)
    phase[i] = std::exp(-kI * (dt * P[i] / psi0.epsilon));

  NBodyTrajectory traj;
  traj.epsilon = psi0.epsilon;
  traj.coupling = psi0.coupling;
  traj.potential = U;
  NBodyWavefunction cur = psi0;
  traj.times.push_back(0.0);
  traj.states.push_back(cur);
  for (long s = 1; s <= plan.steps; ++s) {
    half_kinetic_all(cur.values, g, N, cur.epsilon, dt);
    for (std::size_t i = 0; i < cur.values.size(); ++i) cur.values[i] *= phase[i];
    half_kinetic_all(cur.values, g, N, cur.epsilon, dt);
    if (s % stride == 0) {
      const double t = double(s) * dt;
      if (std::abs(cur.norm() - 1.0) > 1e-6 * std::max(std::abs(t), std::abs(dt))) {
        char msg[128];
        std::snprintf(msg, sizeof(msg), "evolve_nbody: norm drift at t=%.3g", t);
        throw StepSizeError(msg);
      }
      traj.times.push_back(t);
      traj.states.push_back(cur);
    }
  }
  return traj;
}

DensityMatrix nbody_marginal(const NBodyWavefunction& psi, int k) {
  const int N = psi.particles;
  if (k < 1 || k > N)
    throw ArityError("nbody_marginal: order must be in 1..N");
  if (k > 2) throw ArityError("nbody_marginal: grid output is limited to k <= 2");
  const int n = psi.grid.points;
  long rows = 1, cols = 1;
  for (int a = 0; a < k; ++a) rows *= n;
  for (int a = k; a < N; ++a) cols *= n;
  using RowMajorMat =
      Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajorMat> A(psi.values.data(), rows, cols);
  DensityMatrix dm(psi.grid, k);
  dm.kernel = std::pow(psi.grid.spacing(), N - k) * (A * A.adjoint());
  return dm;
}

ResidualReport wigner_equation_residual(const NBodyTrajectory& traj) {
  stencil_guard(traj);
  const int N = traj.states[0].particles;
  if (N > 2)
    throw ArityError("wigner_equation_residual: full-rank symbols capped at rank 2");
  const int s = traj.samples() / 2;
  const double step = traj.times[s + 1] - traj.times[s];
  const double eps = traj.epsilon;
  const Grid& g = traj.states[0].grid;
  const int n = g.points;

  const MuFunction prev = mu_from_density(nbody_marginal(traj.states[s - 1], N), eps);
  const MuFunction cen = mu_from_density(nbody_marginal(traj.states[s], N), eps);
  const MuFunction next = mu_from_density(nbody_marginal(traj.states[s + 1], N), eps);

  WignerFunction W = wigner(nbody_marginal(traj.states[s], N), eps);
  const Grid vg = W.vgrid();

  ResidualReport rep;
  if (N == 1) {
    WignerFunction vW = W;
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l)
        vW.values[std::size_t(m) * n + l] *= vg.coord(l);
    const MuFunction dEta = mu_from_wigner(vW);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t id = std::size_t(i) * n + j;
        const cplx ddt = (next.values[id] - prev.values[id]) / (2.0 * step);
        const cplx tr = cen.xi_coord(i) * (-kI * dEta.values[id]);
        const double r = std::abs(ddt - tr);
        if (r > rep.sup) {
          rep.sup = r;
          rep.bin = {i, j, 0, 0};
        }
        rep.transport_sup = std::max(rep.transport_sup, std::abs(tr));
      }
    return rep;
  }

  WignerFunction v1W = W, v2W = W;
  for (int m1 = 0; m1 < n; ++m1)
    for (int m2 = 0; m2 < n; ++m2)
      for (int l1 = 0; l1 < n; ++l1)
        for (int l2 = 0; l2 < n; ++l2) {
          const std::size_t id =
              ((std::size_t(m1) * n + m2) * n + l1) * n + l2;
          v1W.values[id] *= vg.coord(l1);
          v2W.values[id] *= vg.coord(l2);
        }
  const MuFunction d1 = mu_from_wigner(v1W);
  const MuFunction d2 = mu_from_wigner(v2W);

  const auto measure = traj.potential.lattice_measure(g);
  const double lambda = traj.coupling;
  std::vector<int> shift(measure.size());
  // sin(eps q (eta1 - eta2)/2) depends on the bin difference only
  std::vector<std::vector<double>> stab(measure.size(),
                                        std::vector<double>(2 * n - 1));
  const double deta = cen.eta_spacing();
  for (std::size_t a = 0; a < measure.size(); ++a) {
    shift[a] = atom_shift(measure[a].q, g);
    for (int d = -(n - 1); d <= n - 1; ++d)
      stab[a][d + n - 1] =
          std::sin(eps * measure[a].q * (d * deta) / 2.0);
  }

  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const double xi1 = cen.xi_coord(i1), xi2 = cen.xi_coord(i2);
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2) {
          const std::size_t id =
              ((std::size_t(i1) * n + i2) * n + j1) * n + j2;
          const cplx ddt = (next.values[id] - prev.values[id]) / (2.0 * step);
          const cplx tr = -kI * (xi1 * d1.values[id] + xi2 * d2.values[id]);
          cplx coll{0.0, 0.0};
          for (std::size_t a = 0; a < measure.size(); ++a) {
            const int ia = ((i1 - shift[a]) % n + n) % n;
            const int ib = ((i2 + shift[a]) % n + n) % n;
            coll += measure[a].weight * (2.0 * lambda / eps) *
                    stab[a][j1 - j2 + n - 1] *
                    cen.values[((std::size_t(ia) * n + ib) * n + j1) * n + j2];
          }
          const double r = std::abs(ddt - tr + coll);
          if (r > rep.sup) {
            rep.sup = r;
            rep.bin = {i1, i2, j1, j2};
          }
          rep.transport_sup = std::max(rep.transport_sup, std::abs(tr));
          rep.collision_sup = std::max(rep.collision_sup, std::abs(coll));
        }
    }
  return rep;
}

ResidualReport bbgky_consistency(const NBodyTrajectory& traj, int n_marg,
                                 double prefactor_scale) {
  stencil_guard(traj);
  const int N = traj.states[0].particles;
  if (N > 3) throw ArityError("bbgky_consistency: N <= 3");
  if (n_marg < 1 || n_marg >= N)
    throw ArityError("bbgky_consistency: need 1 <= n < N");
  if (n_marg != 1)
    throw ArityError("bbgky_consistency: implemented for n = 1 (symbol rank cap)");
  const int s = traj.samples() / 2;
  const double step = traj.times[s + 1] - traj.times[s];
  const double eps = traj.epsilon;
  const Grid& g = traj.states[0].grid;
  const int n = g.points;

  const MuFunction prev = mu_from_density(nbody_marginal(traj.states[s - 1], 1), eps);
  const MuFunction cen = mu_from_density(nbody_marginal(traj.states[s], 1), eps);
  const MuFunction next = mu_from_density(nbody_marginal(traj.states[s + 1], 1), eps);
  const MuFunction pair = mu_from_density(nbody_marginal(traj.states[s], 2), eps);

  WignerFunction W = wigner(nbody_marginal(traj.states[s], 1), eps);
  const Grid vg = W.vgrid();
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l) W.at(m, l) *= vg.coord(l);
  const MuFunction dEta = mu_from_wigner(W);

  const auto measure = traj.potential.lattice_measure(g);
  const double coef = prefactor_scale * traj.coupling * (N - n_marg) * 2.0 / eps;

  ResidualReport rep;
  for (int i = 0; i < n; ++i) {
    const double xi = cen.xi_coord(i);
    for (int j = 0; j < n; ++j) {
      const double eta = cen.eta_coord(j);
      const std::size_t id = std::size_t(i) * n + j;
      const cplx ddt = (next.values[id] - prev.values[id]) / (2.0 * step);
      const cplx tr = xi * (-kI * dEta.values[id]);
      cplx coup{0.0, 0.0};
      for (const auto& [q, w] : measure) {
        const int sh = atom_shift(q, g);
        const int ia = ((i - sh) % n + n) % n;
        coup += w * coef * std::sin(eps * q * eta / 2.0) *
                pair.values[((std::size_t(ia) * n + (sh + n / 2)) * n + j) * n +
                            n / 2];
      }
      const double r = std::abs(ddt - tr + coup);
      if (r > rep.sup) {
        rep.sup = r;
        rep.bin = {i, j, 0, 0};
      }
      rep.transport_sup = std::max(rep.transport_sup, std::abs(tr));
      rep.collision_sup = std::max(rep.collision_sup, std::abs(coup));
    }
  }
  return rep;
}

}  // namespace mflab
