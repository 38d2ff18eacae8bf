#include "mflab/density_matrix.hpp"

#include <cmath>

#include "mflab/errors.hpp"
#include "mflab/field.hpp"

namespace mflab {

DensityMatrix::DensityMatrix(const Grid& g, int rank_) : grid(g), rank(rank_) {
  if (g.dim != 1) throw StructuralError("density matrix: kernels are built on 1-d grids");
  if (rank_ < 1 || rank_ > 3) throw ArityError("density matrix: rank must be 1..3");
  double entries = std::pow(double(g.points), 2.0 * rank_);
  if (entries > double(kFieldBudget)) throw CapacityError("density matrix: kernel exceeds the entry budget");
  long s = 1;
  for (int i = 0; i < rank_; ++i) s *= g.points;
  kernel = Eigen::MatrixXcd::Zero(s, s);
}

long DensityMatrix::side() const { return kernel.rows(); }

double DensityMatrix::measure() const { return std::pow(grid.spacing(), rank); }

cplx DensityMatrix::trace() const {
  cplx t = 0.0;
  for (long i = 0; i < side(); ++i) t += kernel(i, i);
  return t * measure();
}

double DensityMatrix::hermiticity_defect() const {
  return (kernel - kernel.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(measure() * kernel, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + side());
  std::sort(ev.begin(), ev.end(), std::greater<double>());
  return ev;
}

double DensityMatrix::max_eigenvalue() const { return eigenvalues().front(); }

double DensityMatrix::min_eigenvalue() const { return eigenvalues().back(); }

void DensityMatrix::validate(double trace_tol, double herm_tol, double psd_tol) const {
  if (hermiticity_defect() > herm_tol)
    throw StructuralError("density matrix: kernel is not hermitian");
  if (std::abs(trace() - 1.0) > trace_tol)
    throw StructuralError("density matrix: trace is not 1");
  if (min_eigenvalue() < -psd_tol)
    throw StructuralError("density matrix: negative eigenvalue");
}

}  // namespace mflab
