#pragma once
#include <Eigen/Dense>
#include <vector>

#include "mflab/density_matrix.hpp"
#include "mflab/grid.hpp"

namespace mflab {

// Weighted orthonormal one-particle wavefunctions {a_j, phi_j}.
// Occupations a_j lie in [0,1] and sum to the particle number N, so the
// induced one-particle operator gamma1 = (1/N) sum a_j |phi_j><phi_j|
// has unit trace and spectrum inside [0, 1/N].
struct OrbitalSet {
  Grid grid;
  Eigen::MatrixXcd phi;     // n x M, column j holds phi_j on the lattice
  std::vector<double> occ;  // occupation of each orbital

  int modes() const { return int(phi.cols()); }
  double particle_sum() const;
  int particles() const;  // particle_sum rounded; throws off-integer

  double orthonormality_defect() const;  // max |h Phi^* Phi - I|
  DensityMatrix gamma1() const;

  // orthonormality, occupation box, Pauli bound on gamma1
  void validate(double tol = 1e-10) const;
};

// closest orthonormal frame in the h-weighted inner product
OrbitalSet lowdin_orthonormalize(const OrbitalSet& s);

}  // namespace mflab
