#pragma once
#include "mflab/orbital_set.hpp"

namespace mflab {

// Momentum shell: the N lowest torus plane waves, N odd, occupations 1.
// Exactly orthonormal on the lattice.
OrbitalSet plane_wave_family(const Grid& g, int N);

// Gaussian bumps of width eps*sigma at the integer sites |k| <= c/eps,
// Lowdin-orthonormalized. The envelope must decay below 1e-10 before the
// torus boundary and stay resolvable on the grid.
OrbitalSet localized_family(const Grid& g, double c, double eps, double sigma);

// Coherent superposition psi_k = beta^(1/2) [phi_k(x) + phi_k(x-e)] built
// from a base family; e must sit on the lattice. The caller supplies a grid
// large enough that both copies fit (double the torus in practice).
OrbitalSet shifted_family(const OrbitalSet& base, double e);

// Random band-limited Slater state: N orthonormal combinations of the
// plane waves |mode| <= band, seeded. Exactly band-limited and exactly
// orthonormal, which the transform roundtrips rely on.
OrbitalSet random_slater(const Grid& g, int N, int band, unsigned seed);

// unit-norm Gaussian bump, building block for fixtures
Eigen::VectorXcd gaussian_orbital(const Grid& g, double center, double width);

}  // namespace mflab
