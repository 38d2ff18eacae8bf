#pragma once
#include <functional>
#include <vector>

#include "mflab/density_matrix.hpp"
#include "mflab/grid.hpp"

namespace mflab {

// Rescaled phase-space distribution on the lattice. Velocities live on the
// half-dual lattice v_l = (eps/2) kappa_l, the finest grid the rescaled
// transform of an n-point kernel can populate. Storage is row-major with
// all position slots before all velocity slots.
struct WignerFunction {
  Grid xgrid;
  double epsilon = 1.0;
  int rank = 1;
  std::vector<double> values;
  double imag_residue = 0.0;  // largest imaginary part discarded by the transform

  Grid vgrid() const { return Grid(1, xgrid.points, 0.5 * epsilon * xgrid.dual_extent()); }
  double dv() const { return 0.5 * epsilon * xgrid.dual_spacing(); }
  long size() const { return long(values.size()); }

  double mass() const;       // sum h^k dv^k values
  double min_value() const;
  double max_abs() const;

  double& at(int m, int l);  // rank-1 accessor
  double at(int m, int l) const;
};

// W(x,v) = (2pi)^{-k} int gamma(x + eps y/2, x - eps y/2) e^{-iv.y} dy,
// the y-sum running over one period of the torus (exact for lattice states).
// Rank 1 or 2.
WignerFunction wigner(const DensityMatrix& gamma, double epsilon);

// gamma(x,y) = int W((x+y)/2, u) e^{i(x-y).u/eps} du. Odd anti-diagonals
// use trigonometric interpolation of W in the center variable, exact for
// band-limited kernels. Rank 1 only.
DensityMatrix inverse_wigner(const WignerFunction& W);

// H = W *_x G_d1 *_v G_d2 by exact Gaussian Fourier multipliers; mass is
// preserved identically. Nonnegative (up to rounding) when d1 d2 >= eps.
WignerFunction husimi(const WignerFunction& W, double delta1, double delta2);

// integrate out the trailing rank-k particle slots
WignerFunction wigner_marginal(const WignerFunction& W, int k);

// sum h dv J(x_m, v_l) W[m][l]  (rank 1)
double pair_observable(const WignerFunction& W, const std::function<double(double, double)>& J);

// spectral d/dx along the position slot (rank 1)
std::vector<double> x_derivative(const WignerFunction& W);

}  // namespace mflab
