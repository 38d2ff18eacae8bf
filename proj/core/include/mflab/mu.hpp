#pragma once
#include <vector>

#include "mflab/density_matrix.hpp"
#include "mflab/wigner.hpp"

namespace mflab {

// Fourier-side state mu(xi, eta) = int W e^{-i xi.x - i eta.v} dx dv.
// xi lives on the dual lattice of x; eta on the y-lattice with spacing
// 2h/eps, so eps*eta/2 is a whole number of lattice steps. For a positive
// unit-trace kernel |mu| <= 1 holds exactly on the lattice.
struct MuFunction {
  Grid xgrid;
  double epsilon = 1.0;
  int rank = 1;
  std::vector<cplx> values;  // (xi..., eta...), n bins per slot

  double xi_coord(int bin) const { return xgrid.dual_coord(bin); }
  double eta_spacing() const { return 2.0 * xgrid.spacing() / epsilon; }
  double eta_coord(int bin) const { return (bin - xgrid.points / 2) * eta_spacing(); }
  long size() const { return long(values.size()); }

  cplx& at(int i, int j);  // rank-1 accessor
  cplx at(int i, int j) const;
  cplx at00() const;       // every slot at zero frequency: the trace
  double max_abs() const;
};

// mu(xi, eta) = h sum_m e^{-i xi x_m} gamma(x_m - eps eta/2, x_m + eps eta/2),
// rank 1 or 2
MuFunction mu_from_density(const DensityMatrix& gamma, double epsilon);

MuFunction mu_from_wigner(const WignerFunction& W);

WignerFunction wigner_from_mu(const MuFunction& mu);

// restriction marginal: zero frequency in the dropped trailing slots
MuFunction mu_restrict(const MuFunction& mu, int k);

}  // namespace mflab
