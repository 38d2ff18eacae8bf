#pragma once
#include <Eigen/Dense>
#include <vector>

#include "mflab/fft.hpp"
#include "mflab/grid.hpp"

namespace mflab {

// Lattice kernel of a k-particle reduced density operator on a 1-d grid.
// The operator acts with the measure h^k, (G f)(X) = h^k sum_Y K(X,Y) f(Y),
// so operator spectra are the eigenvalues of h^k K.
struct DensityMatrix {
  Grid grid;
  int rank = 1;
  Eigen::MatrixXcd kernel;  // side n^rank, row = unprimed multi-index

  DensityMatrix(const Grid& g, int rank_);

  long side() const;
  double measure() const;  // h^rank
  cplx trace() const;
  double hermiticity_defect() const;
  std::vector<double> eigenvalues() const;  // operator eigenvalues, descending
  double max_eigenvalue() const;
  double min_eigenvalue() const;

  // hermiticity, unit trace, positivity
  void validate(double trace_tol = 1e-8, double herm_tol = 1e-10,
                double psd_tol = 1e-10) const;
};

}  // namespace mflab
