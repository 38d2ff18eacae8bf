#pragma once
#include "mflab/field.hpp"
#include "mflab/orbital_set.hpp"

namespace mflab {

// One- and two-particle reduced density matrices of a Slater determinant:
// gamma2 = N/(N-1) [gamma1 (x) gamma1 - exchange], both unit trace.
// Requires all occupations equal to 1 and N >= 2.
std::pair<DensityMatrix, DensityMatrix> slater_marginals(const OrbitalSet& s);

// k-particle marginal of the quasifree state with one-particle operator
// gamma1: the normalized k x k determinant of gamma1 kernels.
DensityMatrix quasifree_marginal(const DensityMatrix& gamma1, int k, int N);

// Momentum distribution rescaled by nu: rho_nu(v) = rho(v/nu)/nu sampled at
// v = nu * kappa on the scaled dual lattice; integral is exactly 1.
Field momentum_density(const OrbitalSet& s, double nu);

}  // namespace mflab
