#pragma once
#include <complex>
#include <vector>

namespace mflab {

using cplx = std::complex<double>;

// Unnormalized DFT along one axis of a row-major multi-axis complex array.
// sign -1: sum f[m] e^{-2пi jm/n}; sign +1: conjugate phases.
void dft_axis(cplx* data, const std::vector<int>& shape, int axis, int sign);

// Centered continuum-convention transform along one axis living on `grid`
// coordinates x_m = -L + m h, k_j = (j - n/2) pi/L:
//   forward:  F[j] = h sum_m f[m] e^{-i k_j x_m}
//   backward: f[m] = (1/2L) sum_j F[j] e^{+i k_j x_m}
// Exact inverse pair on the grid.
void centered_fft_axis(cplx* data, const std::vector<int>& shape, int axis,
                       bool forward, double spacing_h, double extent_L);

}  // namespace mflab
