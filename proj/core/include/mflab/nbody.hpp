#pragma once
#include <vector>

#include "mflab/density_matrix.hpp"
#include "mflab/meanfield.hpp"
#include "mflab/orbital_set.hpp"
#include "mflab/potential.hpp"

namespace mflab {

// wavefunction of N particles on the one-dimensional torus lattice,
// values row-major over grid^N, slot 1 slowest
struct NBodyWavefunction {
  Grid grid;
  int particles = 0;
  double epsilon = 0.0;
  double coupling = 0.0;  // pair interaction strength, 1/N by default
  std::vector<cplx> values;

  std::size_t size() const { return values.size(); }
  double norm() const;                 // sqrt(h^N sum |psi|^2)
  double antisymmetry_defect() const;  // max over pair swaps of |psi_sw + psi|
  void validate(double norm_tol = 1e-10) const;
};

// 2^22 lattice entries; grids above this are not representable here
inline constexpr long kNBodyBudget = 1L << 22;

// determinant state of the N orbitals (all occupations 1), norm 1 exactly
// for an orthonormal frame; coupling < 0 selects the default 1/N
NBodyWavefunction nbody_from_slater(const OrbitalSet& s, double epsilon,
                                    double coupling = -1.0);

struct NBodyTrajectory {
  double epsilon = 0.0;
  double coupling = 0.0;
  Potential potential;
  std::vector<double> times;
  std::vector<NBodyWavefunction> states;

  int samples() const { return int(times.size()); }
};

// Strang split step: half kinetic multiplier per slot in Fourier space, full
// phase of coupling * sum_{j<k} U(x_j - x_k), half kinetic; exactly unitary
NBodyTrajectory evolve_nbody(const NBodyWavefunction& psi0, const Potential& U,
                             double t_final, double dt, int stride = 1);

// gamma^(k) by contraction over the trailing N-k slots, unit trace
DensityMatrix nbody_marginal(const NBodyWavefunction& psi, int k);

// sup-norm residual of the full-rank transported-symbol equation
//   d_t mu = sum_j xi_j grad_eta_j mu
//            - (2 lambda / eps) sum_{j<k} sum_q w_q sin(eps q (eta_j - eta_k)/2)
//              mu(.., xi_j - q, .., xi_k + q, ..)
// at the middle sample; N <= 2 (full-rank symbols are capped at rank 2)
ResidualReport wigner_equation_residual(const NBodyTrajectory& traj);

// residual of the marginal hierarchy equation for mu^(n) against mu^(n+1),
// coupling prefactor lambda (N - n) (2/eps); prefactor_scale multiplies it
// (ablation knob). Implemented for n = 1.
ResidualReport bbgky_consistency(const NBodyTrajectory& traj, int n,
                                 double prefactor_scale = 1.0);

}  // namespace mflab
