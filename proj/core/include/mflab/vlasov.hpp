#pragma once
#include <functional>
#include <vector>

#include "mflab/grid.hpp"
#include "mflab/potential.hpp"

namespace mflab {

// classical phase-space density on a position x velocity window,
// row-major (x, v)
struct VlasovState {
  Grid xgrid;
  Grid vgrid;
  Potential potential;
  std::vector<double> values;
  double clipped_mass = 0.0;  // cumulative mass removed by positivity clipping

  double& at(int m, int l) { return values[std::size_t(m) * vgrid.points + l]; }
  double at(int m, int l) const {
    return values[std::size_t(m) * vgrid.points + l];
  }
  double mass() const;
  double momentum() const;               // integral of v f
  double l2() const;                     // integral of f^2
  double energy() const;                 // (v^2/2) f + (1/2) rho (U*rho)
  std::vector<double> density() const;   // integral over v
  void validate(double mass_tol = 1e-8) const;
};

VlasovState vlasov_from_function(const Grid& xgrid, const Grid& vgrid,
                                 const Potential& U,
                                 const std::function<double(double, double)>& f);

struct VlasovTrajectory {
  std::vector<double> times;
  std::vector<VlasovState> states;
};

// Strang split semi-Lagrangian: half x-advection per velocity row, full
// v-advection by the force -d/dx (U*rho), half x-advection. Cubic Lagrange
// interpolation, periodic in x, zero beyond the velocity window; negative
// interpolation overshoot is clipped to 0 and the removed mass accounted.
// Steps must satisfy dt * v_max <= dx and dt * F_max <= dv.
VlasovTrajectory evolve_vlasov(const VlasovState& initial, double t_final,
                               double dt, int stride = 1);

// pairing integral of f against a phase-space observable
double vlasov_observable(const VlasovState& f,
                         const std::function<double(double, double)>& J);

}  // namespace mflab
