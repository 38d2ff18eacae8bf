#pragma once
#include <vector>

#include "mflab/grid.hpp"

namespace mflab {

enum class PotentialKind { gaussian, cosine };

// one point mass of a spectral measure: weight at wavenumber q
struct SpectralAtom {
  double q = 0.0;
  double weight = 0.0;
};

// Even pair interaction U with Fourier weight Uhat(q) = (1/2pi) int U e^{-iqx} dx.
//   gaussian: U = u0 exp(-x^2 / 2 sigma^2), Uhat > 0 smooth
//   cosine:   U = u0 cos(k0 x), Uhat = (u0/2)(delta_{k0} + delta_{-k0})
struct Potential {
  PotentialKind kind = PotentialKind::gaussian;
  double u0 = 0.0;
  double sigma = 1.0;  // gaussian width
  double k0 = 1.0;     // cosine wavenumber

  static Potential gaussian(double u0, double sigma);
  static Potential cosine(double u0, double k0);
  static Potential zero() { return gaussian(0.0, 1.0); }

  double value(double x) const;
  double fourier(double q) const;  // gaussian kind only (cosine is atomic)
  bool atomic() const { return kind == PotentialKind::cosine; }

  // atoms of the Fourier measure Uhat(q) dq; defined for the cosine kind
  std::vector<SpectralAtom> atoms() const;

  // dual-lattice measure: pairs (q, w) with int Uhat(q) f(q) dq ~= sum w f(q).
  // For the cosine kind k0 must sit on the lattice (periodicity); its two
  // atoms are returned exactly.
  std::vector<SpectralAtom> lattice_measure(const Grid& g) const;

  // continuum Gauss-Legendre measure on the decay window (gaussian kind)
  std::vector<SpectralAtom> continuum_measure(int order) const;

  // band-limited periodic realization on the grid (exact for cosine)
  std::vector<double> on_grid(const Grid& g) const;

  double max_abs_gradient(const Grid& g) const;  // sup |U'| sampled finely
};

// moment norm |U|_m = int |Uhat(q)| |q|^m dq, adaptive quadrature for the
// gaussian kind (closed two-atom sum for cosine)
double potential_norm(const Potential& U, int m, double rel_tol = 1e-8);

double potential_norm_closed_form(const Potential& U, int m);  // oracle

// kappa1 = max_m (|U|_m / m!)^(1/m); the maximizing m is returned via arg_m
double kappa1(const Potential& U, int* arg_m = nullptr);

}  // namespace mflab
