#pragma once
#include <cmath>
#include <numbers>
#include <vector>

#include "mflab/errors.hpp"

namespace mflab {

// Uniform periodic grid on [-extent, extent), points_per_axis points per axis,
// dim spatial dimensions per particle slot.  Dual grid: integer multiples of
// pi/extent in [-k_max, k_max), same point count.
struct Grid {
  int dim = 1;
  int points = 0;        // points per axis, even
  double extent = 0.0;   // half box length L

  Grid() = default;
  Grid(int dim_, int points_, double extent_) : dim(dim_), points(points_), extent(extent_) {
    if (dim < 1 || dim > 3) throw StructuralError("grid: dim must be 1..3");
    if (points < 2 || points % 2 != 0) throw StructuralError("grid: points per axis must be even and >= 2");
    if (!(extent > 0.0)) throw StructuralError("grid: extent must be positive");
  }

  double spacing() const { return 2.0 * extent / points; }
  double dual_spacing() const { return std::numbers::pi / extent; }
  double dual_extent() const { return 0.5 * points * dual_spacing(); }

  // coordinate of index m in [0, points): x = -L + m h
  double coord(int m) const { return -extent + m * spacing(); }
  double dual_coord(int j) const { return (j - points / 2) * dual_spacing(); }

  std::vector<double> coords() const {
    std::vector<double> v(points);
    for (int m = 0; m < points; ++m) v[m] = coord(m);
    return v;
  }
  std::vector<double> dual_coords() const {
    std::vector<double> v(points);
    for (int j = 0; j < points; ++j) v[j] = dual_coord(j);
    return v;
  }

  bool operator==(const Grid& o) const {
    return dim == o.dim && points == o.points && extent == o.extent;
  }
};

}  // namespace mflab
