#pragma once
#include <array>
#include <vector>

#include "mflab/density_matrix.hpp"
#include "mflab/orbital_set.hpp"
#include "mflab/potential.hpp"

namespace mflab {

enum class MeanFieldModel { hartree, hartree_fock };

// rho(x_m) = gamma1(x_m, x_m) of a weighted orbital set, integrates to 1
std::vector<double> orbital_density(const OrbitalSet& s);

// self-consistent potential (U * rho)(x_m). Synthesized from the lattice
// spectral measure of U so the propagators and the residual operators share
// one discretization of the convolution.
std::vector<double> mean_field(const Potential& U, const Grid& g,
                               const std::vector<double>& rho);

// largest step the split propagators accept for this initial state
double meanfield_dt_max(const OrbitalSet& initial, const Potential& U,
                        double epsilon);

struct MeanFieldTrajectory {
  MeanFieldModel model = MeanFieldModel::hartree;
  double epsilon = 0.0;
  Potential potential;
  std::vector<double> times;
  std::vector<OrbitalSet> orbitals;    // hartree samples
  std::vector<DensityMatrix> kernels;  // hartree_fock samples

  int samples() const;
  // one-particle kernel at sample i, either model
  DensityMatrix gamma(int i) const;
};

// hartree: per-orbital Strang step, half kinetic in Fourier, full phase of
// the refreshed mean field, half kinetic. hartree_fock: the dense kernel is
// conjugated by the exponential of the midpoint-predicted generator
// (kinetic + mean field - exchange), which moves omega isospectrally.
// A sample is stored every `stride` steps; stride must divide the step count.
MeanFieldTrajectory evolve_meanfield(const OrbitalSet& initial,
                                     MeanFieldModel model, const Potential& U,
                                     double epsilon, double t_final, double dt,
                                     int stride = 1);

// (eps^2/2) Tr(-Delta gamma) + (1/2) integral U(x-y) rho(x) rho(y)
double hartree_energy(const OrbitalSet& state, const Potential& U,
                      double epsilon);

// distance(run dt, run dt/2) / distance(run dt/2, run dt/4) on the final
// kernel; approaches 4 for a second-order step
double meanfield_richardson_factor(const OrbitalSet& initial,
                                   MeanFieldModel model, const Potential& U,
                                   double epsilon, double t_final, double dt);

struct ResidualReport {
  double sup = 0.0;
  std::array<int, 4> bin{0, 0, 0, 0};  // dual-lattice location of the sup
  double transport_sup = 0.0;          // sup |xi . grad_eta mu|
  double collision_sup = 0.0;          // sup of the collision term alone
};

// sup over the dual lattice of
//   |d_t mu - xi . grad_eta mu + sum_q w_q (2/eps) sin(eps q eta / 2)
//                                mu(xi - q, eta) mu(q, 0)|
// at the middle sample, central time stencil, cyclic shift in xi
ResidualReport hartree_mu_residual(const MeanFieldTrajectory& traj);

}  // namespace mflab
