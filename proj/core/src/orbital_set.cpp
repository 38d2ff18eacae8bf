#include "mflab/orbital_set.hpp"

#include <cmath>
#include <numeric>

#include "mflab/errors.hpp"

namespace mflab {

double OrbitalSet::particle_sum() const {
  return std::accumulate(occ.begin(), occ.end(), 0.0);
}

int OrbitalSet::particles() const {
  double s = particle_sum();
  double r = std::round(s);
  if (std::abs(s - r) > 1e-9 || r < 1.0)
    throw StructuralError("orbital set: occupations do not sum to a particle number");
  return int(r);
}

double OrbitalSet::orthonormality_defect() const {
  Eigen::MatrixXcd overlap = grid.spacing() * (phi.adjoint() * phi);
  overlap -= Eigen::MatrixXcd::Identity(modes(), modes());
  return overlap.cwiseAbs().maxCoeff();
}

DensityMatrix OrbitalSet::gamma1() const {
  const int N = particles();
  DensityMatrix g(grid, 1);
  for (int j = 0; j < modes(); ++j)
    g.kernel.noalias() += (occ[j] / N) * (phi.col(j) * phi.col(j).adjoint());
  return g;
}

void OrbitalSet::validate(double tol) const {
  if (int(occ.size()) != modes())
    throw StructuralError("orbital set: one occupation per orbital");
  for (double a : occ)
    if (a < -tol || a > 1.0 + tol)
      throw PauliBoundError("orbital set: occupation outside [0,1]");
  if (orthonormality_defect() > tol)
    throw StructuralError("orbital set: orbitals are not orthonormal");
  const int N = particles();
  if (gamma1().max_eigenvalue() > 1.0 / N + 1e-12)
    throw PauliBoundError("orbital set: gamma1 exceeds 1/N");
}

OrbitalSet lowdin_orthonormalize(const OrbitalSet& s) {
  Eigen::MatrixXcd S = s.grid.spacing() * (s.phi.adjoint() * s.phi);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
  if (es.eigenvalues().minCoeff() < 1e-12)
    throw StructuralError("orbital set: frame is numerically dependent");
  Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  OrbitalSet out = s;
  out.phi = s.phi * (es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint());
  return out;
}

}  // namespace mflab
