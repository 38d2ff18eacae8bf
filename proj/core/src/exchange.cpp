#include "mflab/exchange.hpp"

#include <cmath>

#include "mflab/errors.hpp"

namespace mflab {
namespace exchange3d {

namespace {

int norm2(const Mode& a) { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; }

int diff2(const Mode& a, const Mode& b) {
  int s = 0;
  for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

int sum2(const Mode& a, const Mode& b) {
  int s = 0;
  for (int i = 0; i < 3; ++i) s += (a[i] + b[i]) * (a[i] + b[i]);
  return s;
}

}  // namespace

std::vector<Mode> fermi_modes(double radius) {
  if (!(radius > 0.0)) throw StructuralError("fermi_modes: radius must be positive");
  const int R = int(std::floor(radius));
  const double r2 = radius * radius;
  std::vector<Mode> m;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b)
      for (int c = -R; c <= R; ++c)
        if (a * a + b * b + c * c <= r2) m.push_back({a, b, c});
  return m;
}

double smooth_exchange(const std::vector<Mode>& modes, double sx, double sv, double eps) {
  const double N = double(modes.size());
  double acc = 0.0;
  for (const Mode& k : modes)
    for (const Mode& l : modes)
      acc += std::exp(-0.5 * sx * sx * diff2(k, l) -
                      0.125 * sv * sv * eps * eps * sum2(k, l));
  return acc / (N * N);
}

double coulomb_exchange(const std::vector<Mode>& modes) {
  const double N = double(modes.size());
  double acc = 0.0;
  for (const Mode& k : modes)
    for (const Mode& l : modes) {
      const int d2 = diff2(k, l);
      if (d2 > 0) acc += 1.0 / d2;
    }
  return acc / (N * N);
}

double single_mode_exchange(const std::vector<Mode>& modes, const Mode& q, double sv, double eps) {
  const double N = double(modes.size());
  double acc = 0.0;
  for (const Mode& k : modes)
    for (const Mode& l : modes) {
      if (k[0] - l[0] != q[0] || k[1] - l[1] != q[1] || k[2] - l[2] != q[2]) continue;
      acc += std::exp(-0.125 * sv * sv * eps * eps * sum2(k, l));
    }
  return acc / (N * N);
}

double product_pairing(const std::vector<Mode>& modes, double sv, double eps) {
  const double N = double(modes.size());
  double s1 = 0.0;
  for (const Mode& k : modes)
    s1 += std::exp(-0.5 * sv * sv * eps * eps * norm2(k));
  s1 /= N;
  return s1 * s1;
}

double factorization_defect(const std::vector<Mode>& modes, double sx, double sv, double eps) {
  const double N = double(modes.size());
  if (N < 2) throw ArityError("factorization_defect: need at least two modes");
  // both observable factors carry the Gaussian profiles, hence the sqrt(2)
  const double prod = product_pairing(modes, sv * std::sqrt(2.0), eps);
  const double ex = smooth_exchange(modes, sx * std::sqrt(2.0), sv * std::sqrt(2.0), eps);
  return std::abs(N / (N - 1.0) * (prod - ex) - prod);
}

}  // namespace exchange3d
}  // namespace mflab
