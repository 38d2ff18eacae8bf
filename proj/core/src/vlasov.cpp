#include "mflab/vlasov.hpp"

#include <cmath>
#include <cstdio>

#include "mflab/errors.hpp"
#include "mflab/fft.hpp"
#include "mflab/meanfield.hpp"

namespace mflab {

namespace {

// 4-point Lagrange weights for a sample at fractional offset theta past the
// node base, nodes {-1, 0, 1, 2} relative to base
struct CubicStencil {
  int base;  // floor offset added to the destination index
  double w[4];
};

CubicStencil stencil_for_shift(double s) {
  const double p = -s;
  const int d0 = int(std::floor(p));
  const double t = p - d0;
  CubicStencil c;
  c.base = d0;
  c.w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;   // node -1
  c.w[1] = (t * t - 1.0) * (t - 2.0) / 2.0;    // node 0
  c.w[2] = -t * (t + 1.0) * (t - 2.0) / 2.0;   // node 1
  c.w[3] = t * (t * t - 1.0) / 6.0;            // node 2
  return c;
}

// dst[i] = src interpolated at i - s, indices wrapped
void shift_line_periodic(const double* src, double* dst, int n, double s) {
  const CubicStencil c = stencil_for_shift(s);
  for (int i = 0; i < n; ++i) {
    const int b = i + c.base;
    dst[i] = c.w[0] * src[((b - 1) % n + n) % n] +
             c.w[1] * src[(b % n + n) % n] +
             c.w[2] * src[((b + 1) % n + n) % n] +
             c.w[3] * src[((b + 2) % n + n) % n];
  }
}

// dst[i] = src interpolated at i - s, zero beyond the window
void shift_line_zero(const double* src, double* dst, int n, double s) {
  const CubicStencil c = stencil_for_shift(s);
  auto get = [&](int k) { return (k < 0 || k >= n) ? 0.0 : src[k]; };
  for (int i = 0; i < n; ++i) {
    const int b = i + c.base;
    dst[i] = c.w[0] * get(b - 1) + c.w[1] * get(b) + c.w[2] * get(b + 1) +
             c.w[3] * get(b + 2);
  }
}

// clip interpolation undershoots, then restore the pre-substep mass so
// clipping never shows up in the mass ledger; clipped_mass records the total
void clip_negative(VlasovState& f, double mass_before) {
  const double cell = f.xgrid.spacing() * f.vgrid.spacing();
  for (double& v : f.values)
    if (v < 0.0) {
      f.clipped_mass += -v * cell;
      v = 0.0;
    }
  const double m = f.mass();
  if (m > 0.0 && mass_before > 0.0) {
    const double r = mass_before / m;
    for (double& v : f.values) v *= r;
  }
}

// half step of free streaming: every velocity row shifted by v dt/2
void advect_x(VlasovState& f, double dt_half) {
  const int nx = f.xgrid.points, nv = f.vgrid.points;
  const double m0 = f.mass();
  std::vector<double> line(nx), out(nx);
  for (int l = 0; l < nv; ++l) {
    const double s = f.vgrid.coord(l) * dt_half / f.xgrid.spacing();
    for (int m = 0; m < nx; ++m) line[m] = f.at(m, l);
    shift_line_periodic(line.data(), out.data(), nx, s);
    for (int m = 0; m < nx; ++m) f.at(m, l) = out[m];
  }
  clip_negative(f, m0);
}

std::vector<double> force_field(const VlasovState& f) {
  const Grid& g = f.xgrid;
  const std::vector<double> V = mean_field(f.potential, g, f.density());
  std::vector<cplx> w(V.begin(), V.end());
  centered_fft_axis(w.data(), {g.points}, 0, true, g.spacing(), g.extent);
  for (int k = 0; k < g.points; ++k) {
    // drop the unpaired top mode so the derivative of a real field stays real
    w[k] *= (k == 0) ? cplx{0.0, 0.0} : cplx{0.0, g.dual_coord(k)};
  }
  centered_fft_axis(w.data(), {g.points}, 0, false, g.spacing(), g.extent);
  std::vector<double> F(g.points);
  for (int m = 0; m < g.points; ++m) F[m] = -w[m].real();
  return F;
}

void advect_v(VlasovState& f, double dt, const std::vector<double>& F) {
  const int nv = f.vgrid.points;
  const double m0 = f.mass();
  std::vector<double> out(nv);
  for (int m = 0; m < f.xgrid.points; ++m) {
    const double s = F[m] * dt / f.vgrid.spacing();
    double* row = &f.at(m, 0);
    shift_line_zero(row, out.data(), nv, s);
    for (int l = 0; l < nv; ++l) row[l] = out[l];
  }
  clip_negative(f, m0);
}

}  // namespace

double VlasovState::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * xgrid.spacing() * vgrid.spacing();
}

double VlasovState::momentum() const {
  double s = 0.0;
  for (int m = 0; m < xgrid.points; ++m)
    for (int l = 0; l < vgrid.points; ++l) s += vgrid.coord(l) * at(m, l);
  return s * xgrid.spacing() * vgrid.spacing();
}

double VlasovState::l2() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s * xgrid.spacing() * vgrid.spacing();
}

std::vector<double> VlasovState::density() const {
  std::vector<double> rho(xgrid.points, 0.0);
  for (int m = 0; m < xgrid.points; ++m)
    for (int l = 0; l < vgrid.points; ++l) rho[m] += at(m, l);
  for (double& r : rho) r *= vgrid.spacing();
  return rho;
}

double VlasovState::energy() const {
  double kin = 0.0;
  for (int m = 0; m < xgrid.points; ++m)
    for (int l = 0; l < vgrid.points; ++l) {
      const double v = vgrid.coord(l);
      kin += 0.5 * v * v * at(m, l);
    }
  kin *= xgrid.spacing() * vgrid.spacing();
  const std::vector<double> rho = density();
  const std::vector<double> V = mean_field(potential, xgrid, rho);
  double pot = 0.0;
  for (int m = 0; m < xgrid.points; ++m) pot += V[m] * rho[m];
  pot *= 0.5 * xgrid.spacing();
  return kin + pot;
}

void VlasovState::validate(double mass_tol) const {
  if (int(values.size()) != xgrid.points * vgrid.points)
    throw StructuralError("vlasov: value array does not match the grids");
  double lo = 0.0;
  for (double v : values) lo = std::min(lo, v);
  if (lo < -1e-12) throw StructuralError("vlasov: density must be nonnegative");
  if (std::abs(mass() - 1.0) > mass_tol)
    throw StructuralError("vlasov: mass must be 1");
}

VlasovState vlasov_from_function(const Grid& xgrid, const Grid& vgrid,
                                 const Potential& U,
                                 const std::function<double(double, double)>& f) {
  VlasovState st;
  st.xgrid = xgrid;
  st.vgrid = vgrid;
  st.potential = U;
  st.values.resize(std::size_t(xgrid.points) * vgrid.points);
  for (int m = 0; m < xgrid.points; ++m)
    for (int l = 0; l < vgrid.points; ++l)
      st.at(m, l) = f(xgrid.coord(m), vgrid.coord(l));
  return st;
}

VlasovTrajectory evolve_vlasov(const VlasovState& initial, double t_final,
                               double dt, int stride) {
  initial.validate();
  if (dt == 0.0 || t_final / dt < 0.0)
    throw StructuralError("evolve_vlasov: step must advance toward t_final");
  if (stride < 1) throw StructuralError("evolve_vlasov: stride must be >= 1");
  const long steps = std::lround(t_final / dt);
  if (std::abs(double(steps) * dt - t_final) >
      1e-9 * std::max(1.0, std::abs(t_final)))
    throw StructuralError("evolve_vlasov: t_final is not a whole number of steps");
  if (steps % stride != 0)
    throw StructuralError("evolve_vlasov: stride must divide the step count");
  const double vmax = initial.vgrid.extent;
  if (std::abs(dt) * vmax > initial.xgrid.spacing() * (1.0 + 1e-12)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "evolve_vlasov: dt %.3e breaks dt*vmax <= dx", std::abs(dt));
    throw StepSizeError(msg);
  }

  VlasovTrajectory traj;
  VlasovState cur = initial;
  traj.times.push_back(0.0);
  traj.states.push_back(cur);
  for (long s = 1; s <= steps; ++s) {
    advect_x(cur, dt / 2.0);
    const std::vector<double> F = force_field(cur);
    double fmax = 0.0;
    for (double x : F) fmax = std::max(fmax, std::abs(x));
    if (std::abs(dt) * fmax > cur.vgrid.spacing() * (1.0 + 1e-12)) {
      char msg[128];
      std::snprintf(msg, sizeof(msg),
                    "evolve_vlasov: dt %.3e breaks dt*Fmax <= dv at t=%.3g",
                    std::abs(dt), double(s) * dt);
      throw StepSizeError(msg);
    }
    advect_v(cur, dt, F);
    advect_x(cur, dt / 2.0);
    if (s % stride == 0) {
      traj.times.push_back(double(s) * dt);
      traj.states.push_back(cur);
    }
  }
  return traj;
}

double vlasov_observable(const VlasovState& f,
                         const std::function<double(double, double)>& J) {
  double s = 0.0;
  for (int m = 0; m < f.xgrid.points; ++m)
    for (int l = 0; l < f.vgrid.points; ++l)
      s += J(f.xgrid.coord(m), f.vgrid.coord(l)) * f.at(m, l);
  return s * f.xgrid.spacing() * f.vgrid.spacing();
}

}  // namespace mflab
