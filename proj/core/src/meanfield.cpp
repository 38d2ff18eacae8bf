#include "mflab/meanfield.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mflab/errors.hpp"
#include "mflab/fft.hpp"
#include "mflab/mu.hpp"
#include "mflab/wigner.hpp"

namespace mflab {

namespace {

constexpr cplx kI{0.0, 1.0};

// dual-lattice bin of a spectral atom; the measure construction guarantees
// the atom sits on the lattice
int atom_bin(double q, const Grid& g) {
  const double r = q / g.dual_spacing();
  const long b = std::lround(r);
  if (std::abs(r - double(b)) > 1e-9)
    throw StructuralError("mean_field: spectral atom off the dual lattice");
  return int(b) + g.points / 2;
}

void half_kinetic(Eigen::MatrixXcd& phi, const Grid& g,
                  const std::vector<cplx>& sym) {
  const std::vector<int> shape{g.points};
  for (int j = 0; j < phi.cols(); ++j) {
    cplx* col = phi.data() + std::size_t(j) * g.points;
    centered_fft_axis(col, shape, 0, true, g.spacing(), g.extent);
    for (int k = 0; k < g.points; ++k) col[k] *= sym[k];
    centered_fft_axis(col, shape, 0, false, g.spacing(), g.extent);
  }
}

std::vector<cplx> kinetic_half_symbol(const Grid& g, double epsilon,
                                      double dt) {
  std::vector<cplx> sym(g.points);
  for (int k = 0; k < g.points; ++k) {
    const double kk = g.dual_coord(k);
    sym[k] = std::exp(-kI * (epsilon * kk * kk * dt / 4.0));
  }
  return sym;
}

void check_drift(double defect, double t, double dt,
                 const char* what) {
  if (defect > 1e-6 * std::max(std::abs(t), std::abs(dt))) {
    char msg[128];
    std::snprintf(msg, sizeof(msg), "evolve_meanfield: %s drift %.3e at t=%.3g",
                  what, defect, t);
    throw StepSizeError(msg);
  }
}

// matmul-algebra matrix of the kinetic operator, column profile via the
// spectral symbol; real circulant, hermitian
Eigen::MatrixXcd kinetic_matrix(const Grid& g, double epsilon) {
  const int n = g.points;
  std::vector<double> profile(n, 0.0);
  for (int d = 0; d < n; ++d) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      const double kk = g.dual_coord(k);
      s += 0.5 * epsilon * epsilon * kk * kk *
           std::cos(kk * g.spacing() * d);
    }
    profile[d] = s * g.spacing() / (2.0 * g.extent);
  }
  // the unpaired mode at -K contributes (-1)^d, already real in the cos sum
  Eigen::MatrixXcd T(n, n);
  for (int m = 0; m < n; ++m)
    for (int mp = 0; mp < n; ++mp) T(m, mp) = profile[(m - mp + n) % n];
  return T;
}

struct HfWorkspace {
  Eigen::MatrixXcd T;      // kinetic, matmul algebra
  Eigen::MatrixXd upair;   // U_per(x_m - x_m'), from the lattice measure
};

// generator H(W) = T + diag(U*rho) - exchange, in the matmul algebra where
// W = h * kernel and operator products are plain matrix products
Eigen::MatrixXcd hf_generator(const HfWorkspace& ws, const Potential& U,
                              const Grid& g, const Eigen::MatrixXcd& W) {
  const int n = g.points;
  std::vector<double> rho(n);
  for (int m = 0; m < n; ++m) rho[m] = W(m, m).real() / g.spacing();
  const std::vector<double> V = mean_field(U, g, rho);
  Eigen::MatrixXcd H = ws.T - (ws.upair.array() * W.array()).matrix();
  for (int m = 0; m < n; ++m) H(m, m) += V[m];
  return H;
}

double kernel_sup_diff(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.kernel - b.kernel).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<double> orbital_density(const OrbitalSet& s) {
  const int n = s.grid.points;
  const double N = s.particle_sum();
  std::vector<double> rho(n, 0.0);
  for (int j = 0; j < s.modes(); ++j)
    for (int m = 0; m < n; ++m) rho[m] += s.occ[j] / N * std::norm(s.phi(m, j));
  return rho;
}

std::vector<double> mean_field(const Potential& U, const Grid& g,
                               const std::vector<double>& rho) {
  if (int(rho.size()) != g.points)
    throw StructuralError("mean_field: density does not match the grid");
  const int n = g.points;
  std::vector<cplx> work(rho.begin(), rho.end());
  const std::vector<int> shape{n};
  centered_fft_axis(work.data(), shape, 0, true, g.spacing(), g.extent);
  std::vector<cplx> mult(n, cplx{0.0, 0.0});
  for (const auto& [q, w] : U.lattice_measure(g))
    mult[atom_bin(q, g)] += 2.0 * g.extent * w;
  for (int k = 0; k < n; ++k) work[k] *= mult[k];
  centered_fft_axis(work.data(), shape, 0, false, g.spacing(), g.extent);
  std::vector<double> v(n);
  for (int m = 0; m < n; ++m) v[m] = work[m].real();
  return v;
}

double meanfield_dt_max(const OrbitalSet& initial, const Potential& U,
                        double epsilon) {
  const Grid& g = initial.grid;
  const double h = g.spacing();
  double bound = epsilon * h * h / std::numbers::pi;
  const std::vector<double> V = mean_field(U, g, orbital_density(initial));
  double vmax = 0.0;
  for (double x : V) vmax = std::max(vmax, std::abs(x));
  if (vmax > 1e-300) bound = std::min(bound, 0.1 * epsilon / vmax);
  return bound;
}

int MeanFieldTrajectory::samples() const { return int(times.size()); }

DensityMatrix MeanFieldTrajectory::gamma(int i) const {
  if (i < 0 || i >= samples())
    throw StructuralError("MeanFieldTrajectory: sample index out of range");
  if (model == MeanFieldModel::hartree) return orbitals[i].gamma1();
  return kernels[i];
}

MeanFieldTrajectory evolve_meanfield(const OrbitalSet& initial,
                                     MeanFieldModel model, const Potential& U,
                                     double epsilon, double t_final, double dt,
                                     int stride) {
  initial.validate();
  if (!(epsilon > 0.0))
    throw StructuralError("evolve_meanfield: scale must be positive");
  if (dt == 0.0 || t_final / dt < 0.0)
    throw StructuralError("evolve_meanfield: step must advance toward t_final");
  if (stride < 1) throw StructuralError("evolve_meanfield: stride must be >= 1");
  const long steps = std::lround(t_final / dt);
  if (std::abs(double(steps) * dt - t_final) >
      1e-9 * std::max(1.0, std::abs(t_final)))
    throw StructuralError("evolve_meanfield: t_final is not a whole number of steps");
  if (steps % stride != 0)
    throw StructuralError("evolve_meanfield: stride must divide the step count");
  const double cap = meanfield_dt_max(initial, U, epsilon);
  if (std::abs(dt) > cap * (1.0 + 1e-12)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "evolve_meanfield: dt %.3e above the stable bound %.3e",
                  std::abs(dt), cap);
    throw StepSizeError(msg);
  }

  const Grid& g = initial.grid;
  MeanFieldTrajectory traj;
  traj.model = model;
  traj.epsilon = epsilon;
  traj.potential = U;

  if (model == MeanFieldModel::hartree) {
    OrbitalSet cur = initial;
    const std::vector<cplx> sym = kinetic_half_symbol(g, epsilon, dt);
    traj.times.push_back(0.0);
    traj.orbitals.push_back(cur);
    for (long s = 1; s <= steps; ++s) {
      half_kinetic(cur.phi, g, sym);
      const std::vector<double> V = mean_field(U, g, orbital_density(cur));
      for (int m = 0; m < g.points; ++m) {
        const cplx ph = std::exp(-kI * (V[m] * dt / epsilon));
        cur.phi.row(m) *= ph;
      }
      half_kinetic(cur.phi, g, sym);
      if (s % stride == 0) {
        const double t = double(s) * dt;
        check_drift(cur.orthonormality_defect(), t, dt, "orthonormality");
        traj.times.push_back(t);
        traj.orbitals.push_back(cur);
      }
    }
    return traj;
  }

  if (g.points > 256)
    throw CapacityError("evolve_meanfield: hartree_fock kernels capped at 256 points");
  HfWorkspace ws;
  ws.T = kinetic_matrix(g, epsilon);
  ws.upair.resize(g.points, g.points);
  const std::vector<double> uvals = U.on_grid(g);
  for (int m = 0; m < g.points; ++m)
    for (int mp = 0; mp < g.points; ++mp)
      ws.upair(m, mp) = uvals[(m - mp + g.points / 2 + 4 * g.points) % g.points];

  DensityMatrix start = initial.gamma1();
  Eigen::MatrixXcd W = start.kernel * g.spacing();
  traj.times.push_back(0.0);
  traj.kernels.push_back(start);
  for (long s = 1; s <= steps; ++s) {
    const Eigen::MatrixXcd H0 = hf_generator(ws, U, g, W);
    Eigen::MatrixXcd Wh =
        W + (dt / 2.0) * ((H0 * W - W * H0) / (kI * epsilon));
    Wh = 0.5 * (Wh + Wh.adjoint().eval());
    const Eigen::MatrixXcd Hm = hf_generator(ws, U, g, Wh);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hm);
    if (es.info() != Eigen::Success)
      throw StructuralError("evolve_meanfield: generator eigensolve failed");
    Eigen::VectorXcd ph(g.points);
    for (int k = 0; k < g.points; ++k)
      ph(k) = std::exp(-kI * (dt * es.eigenvalues()(k) / epsilon));
    const Eigen::MatrixXcd E =
        es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    W = (E * W * E.adjoint()).eval();
    W = 0.5 * (W + W.adjoint().eval());
    if (s % stride == 0) {
      const double t = double(s) * dt;
      check_drift(std::abs(W.trace().real() - 1.0), t, dt, "trace");
      DensityMatrix gm(g, 1);
      gm.kernel = W / g.spacing();
      traj.times.push_back(t);
      traj.kernels.push_back(std::move(gm));
    }
  }
  return traj;
}

double hartree_energy(const OrbitalSet& state, const Potential& U,
                      double epsilon) {
  state.validate();
  const Grid& g = state.grid;
  const int n = g.points;
  const double N = state.particle_sum();
  const std::vector<int> shape{n};
  double kin = 0.0;
  std::vector<cplx> col(n);
  for (int j = 0; j < state.modes(); ++j) {
    for (int m = 0; m < n; ++m) col[m] = state.phi(m, j);
    centered_fft_axis(col.data(), shape, 0, true, g.spacing(), g.extent);
    double e = 0.0;
    for (int k = 0; k < n; ++k) {
      const double kk = g.dual_coord(k);
      e += 0.5 * epsilon * epsilon * kk * kk * std::norm(col[k]);
    }
    kin += state.occ[j] / N * e * g.dual_spacing() / (2.0 * std::numbers::pi);
  }
  const std::vector<double> rho = orbital_density(state);
  const std::vector<double> V = mean_field(U, g, rho);
  double pot = 0.0;
  for (int m = 0; m < n; ++m) pot += V[m] * rho[m];
  pot *= 0.5 * g.spacing();
  return kin + pot;
}

double meanfield_richardson_factor(const OrbitalSet& initial,
                                   MeanFieldModel model, const Potential& U,
                                   double epsilon, double t_final, double dt) {
  auto final_gamma = [&](double step) {
    const long n = std::lround(t_final / step);
    MeanFieldTrajectory t = evolve_meanfield(initial, model, U, epsilon,
                                             t_final, step, int(n));
    return t.gamma(t.samples() - 1);
  };
  const DensityMatrix a = final_gamma(dt);
  const DensityMatrix b = final_gamma(dt / 2.0);
  const DensityMatrix c = final_gamma(dt / 4.0);
  const double d1 = kernel_sup_diff(a, b);
  const double d2 = kernel_sup_diff(b, c);
  if (d2 <= 0.0)
    throw PreconditionError("meanfield_richardson_factor: refinement distance vanished");
  return d1 / d2;
}

ResidualReport hartree_mu_residual(const MeanFieldTrajectory& traj) {
  if (traj.samples() < 3)
    throw PreconditionError("hartree_mu_residual: needs >= 3 samples for the time stencil");
  const int s = traj.samples() / 2;
  const double dtp = traj.times[s + 1] - traj.times[s];
  const double dtm = traj.times[s] - traj.times[s - 1];
  if (std::abs(dtp - dtm) > 1e-12 * std::max(1.0, std::abs(dtp)))
    throw PreconditionError("hartree_mu_residual: non-uniform samples around the stencil");

  const double eps = traj.epsilon;
  const MuFunction prev = mu_from_density(traj.gamma(s - 1), eps);
  const MuFunction cen = mu_from_density(traj.gamma(s), eps);
  const MuFunction next = mu_from_density(traj.gamma(s + 1), eps);
  const Grid& g = cen.xgrid;
  const int n = g.points;

  WignerFunction W = wigner(traj.gamma(s), eps);
  const Grid vg = W.vgrid();
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l) W.at(m, l) *= vg.coord(l);
  const MuFunction dEta = mu_from_wigner(W);

  // collision multipliers: atom shifts on the dual lattice
  const auto measure = traj.potential.lattice_measure(g);
  std::vector<int> shift(measure.size());
  std::vector<double> weight(measure.size());
  for (std::size_t a = 0; a < measure.size(); ++a) {
    shift[a] = atom_bin(measure[a].q, g) - n / 2;
    weight[a] = measure[a].weight;
  }

  ResidualReport rep;
  for (int i = 0; i < n; ++i) {
    const double xi = cen.xi_coord(i);
    for (int j = 0; j < n; ++j) {
      const double eta = cen.eta_coord(j);
      const cplx ddt = (next.values[std::size_t(i) * n + j] -
                        prev.values[std::size_t(i) * n + j]) /
                       (2.0 * dtp);
      const cplx transport = xi * (-kI * dEta.values[std::size_t(i) * n + j]);
      cplx coll{0.0, 0.0};
      for (std::size_t a = 0; a < measure.size(); ++a) {
        const int is = ((i - shift[a]) % n + n) % n;
        coll += weight[a] * (2.0 / eps) *
                std::sin(eps * measure[a].q * eta / 2.0) *
                cen.values[std::size_t(is) * n + j] *
                cen.values[std::size_t(shift[a] + n / 2) * n + n / 2];
      }
      const double r = std::abs(ddt - transport + coll);
      if (r > rep.sup) {
        rep.sup = r;
        rep.bin = {i, j, 0, 0};
      }
      rep.transport_sup = std::max(rep.transport_sup, std::abs(transport));
      rep.collision_sup = std::max(rep.collision_sup, std::abs(coll));
    }
  }
  return rep;
}

}  // namespace mflab
