#pragma once
#include "mflab/field.hpp"

namespace mflab {

// Periodized smoothing kernel G_delta(z) = (pi delta^2)^(-axes/2) exp(-z^2/delta^2)
// over grid^(rank*dim), image-summed so the discrete mass is 1 to rounding.
// delta below 2 grid spacings is rejected (unresolved kernel).
Field gaussian_kernel(const Grid& g, double delta, int rank = 1);

// closed-form helpers for the same kernel on the line
double gaussian_kernel_peak(double delta, int axes);          // value at 0
double gaussian_kernel_second_moment(double delta, int axes); // int z^2 G

// one periodized axis profile, mass h*sum == 1 + O(e^{-(pi delta/h)^2})
std::vector<double> gaussian_axis_profile(const Grid& g, double delta);

// Fourier multiplier of G_delta on the dual lattice: exp(-delta^2 k^2 / 4)
double gaussian_multiplier(double delta, double k);

}  // namespace mflab
