#include "mflab/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace mflab {

using std::numbers::pi;

std::vector<double> gaussian_axis_profile(const Grid& g, double delta) {
  if (delta < 2.0 * g.spacing())
    throw ResolutionError("gaussian_kernel: width below two grid spacings");
  const double period = 2.0 * g.extent;
  const int images = std::max(1, int(std::ceil(8.0 * delta / period)) + 1);
  std::vector<double> prof(g.points, 0.0);
  const double norm = 1.0 / std::sqrt(pi * delta * delta);
  for (int m = 0; m < g.points; ++m) {
    const double z = g.coord(m);
    double s = 0.0;
    for (int im = -images; im <= images; ++im) {
      const double zz = z + im * period;
      s += std::exp(-zz * zz / (delta * delta));
    }
    prof[m] = norm * s;
  }
  return prof;
}

Field gaussian_kernel(const Grid& g, double delta, int rank) {
  Field f = make_field(g, rank, Space::position);
  const auto prof = gaussian_axis_profile(g, delta);
  const auto shape = f.shape();
  const auto str = strides_for(shape);
  for (size_t i = 0; i < f.values.size(); ++i) {
    double v = 1.0;
    for (size_t a = 0; a < shape.size(); ++a)
      v *= prof[(long(i) / str[a]) % shape[a]];
    f.values[i] = v;
  }
  return f;
}

double gaussian_kernel_peak(double delta, int axes) {
  return std::pow(pi * delta * delta, -0.5 * axes);
}

double gaussian_kernel_second_moment(double delta, int axes) {
  // per axis: int z^2 (pi d^2)^{-1/2} e^{-z^2/d^2} dz = d^2/2
  return axes * delta * delta / 2.0;
}

double gaussian_multiplier(double delta, double k) {
  return std::exp(-0.25 * delta * delta * k * k);
}

}  // namespace mflab
