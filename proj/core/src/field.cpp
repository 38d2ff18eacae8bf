#include "mflab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mflab {

Field make_field(const Grid& g, int rank, Space space) {
  if (rank < 1) throw ArityError("field: rank must be >= 1");
  const int axes = rank * g.dim;
  double entries = std::pow(double(g.points), axes);
  if (entries > double(kFieldBudget))
    throw CapacityError("field: points^(rank*dim) exceeds in-core budget");
  Field f;
  f.grid = g;
  f.rank = rank;
  f.space = space;
  f.values.assign(size_t(entries + 0.5), cplx(0.0, 0.0));
  return f;
}

void fourier_pair(Field& f, bool forward) {
  if ((f.space == Space::frequency) == forward)
    throw StructuralError("fourier_pair: field already in target space");
  const auto shape = f.shape();
  for (int a = 0; a < f.naxes(); ++a)
    centered_fft_axis(f.values.data(), shape, a, forward, f.grid.spacing(),
                      f.grid.extent);
  f.space = forward ? Space::frequency : Space::position;
}

double l2_norm_sq(const Field& f) {
  const double per_axis = f.space == Space::position
                              ? f.grid.spacing()
                              : f.grid.dual_spacing() / (2.0 * std::numbers::pi);
  double measure = 1.0;
  for (int a = 0; a < f.naxes(); ++a) measure *= per_axis;
  double s = 0.0;
  for (const cplx& v : f.values) s += std::norm(v);
  return s * measure;
}

cplx integral(const Field& f) {
  if (f.space != Space::position)
    throw PreconditionError("integral: field must be in position space");
  double measure = 1.0;
  for (int a = 0; a < f.naxes(); ++a) measure *= f.grid.spacing();
  cplx s(0.0, 0.0);
  for (const cplx& v : f.values) s += v;
  return s * measure;
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (const cplx& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double boundary_max(const Field& f) {
  const auto shape = f.shape();
  const auto str = strides_for(shape);
  double m = 0.0;
  for (size_t i = 0; i < f.values.size(); ++i) {
    bool on_boundary = false;
    for (size_t a = 0; a < shape.size(); ++a)
      if ((long(i) / str[a]) % shape[a] == 0) { on_boundary = true; break; }
    if (on_boundary) m = std::max(m, std::abs(f.values[i]));
  }
  return m;
}

std::vector<long> strides_for(const std::vector<int>& shape) {
  std::vector<long> s(shape.size(), 1);
  for (int a = int(shape.size()) - 2; a >= 0; --a) s[a] = s[a + 1] * shape[a + 1];
  return s;
}

}  // namespace mflab
