#pragma once
#include <complex>
#include <vector>

#include "mflab/errors.hpp"
#include "mflab/fft.hpp"
#include "mflab/grid.hpp"

namespace mflab {

enum class Space { position, frequency };

// Complex field over grid^(rank*dim), row-major, every axis of length
// grid.points.  rank counts particle slots.
struct Field {
  Grid grid;
  int rank = 1;
  Space space = Space::position;
  std::vector<cplx> values;

  int naxes() const { return rank * grid.dim; }
  std::vector<int> shape() const { return std::vector<int>(naxes(), grid.points); }
  size_t size() const { return values.size(); }
};

// entries, not bytes; rank-2 kernels on fine grids must stream instead
inline constexpr size_t kFieldBudget = size_t(1) << 24;

Field make_field(const Grid& g, int rank, Space space = Space::position);

// In-place transform of every axis; space flag flipped.  Forward maps
// position -> frequency with F(k) = int f(x) e^{-ikx} dx realized on the grid;
// backward is its exact inverse.
void fourier_pair(Field& f, bool forward);

// Discrete L2 norm squared with the measure of the field's space
// (h per position axis, dual_spacing/2pi per frequency axis).
double l2_norm_sq(const Field& f);

// sum * h^axes (position space only)
cplx integral(const Field& f);

double max_abs(const Field& f);

// largest |value| on the axis-boundary shell (any index == 0); used to check
// that kernels decay inside the periodic window
double boundary_max(const Field& f);

std::vector<long> strides_for(const std::vector<int>& shape);

}  // namespace mflab
