#include "mflab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace mflab {

namespace {

// Plans are created FFTW_UNALIGNED so one plan serves any buffer of the
// matching geometry.  Cached forever; FFTW planning is not thread-safe.
class PlanCache {
 public:
  static fftw_plan get(int n, int inner_stride, int sign) {
    static PlanCache cache;
    std::scoped_lock lk(cache.mtx_);
    auto key = std::make_tuple(n, inner_stride, sign);
    auto it = cache.plans_.find(key);
    if (it != cache.plans_.end()) return it->second;
    std::vector<fftw_complex> dummy(static_cast<size_t>(n) * inner_stride);
    fftw_plan p = fftw_plan_many_dft(
        1, &n, inner_stride, dummy.data(), nullptr, inner_stride, 1,
        dummy.data(), nullptr, inner_stride, 1, sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fft: plan creation failed");
    cache.plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  std::mutex mtx_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

}  // namespace

void dft_axis(cplx* data, const std::vector<int>& shape, int axis, int sign) {
  const int n = shape[axis];
  long inner = 1, outer = 1;
  for (size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  for (int a = 0; a < axis; ++a) outer *= shape[a];
  fftw_plan plan = PlanCache::get(n, static_cast<int>(inner), sign);
  const long block = static_cast<long>(n) * inner;
  for (long o = 0; o < outer; ++o) {
    auto* p = reinterpret_cast<fftw_complex*>(data + o * block);
    fftw_execute_dft(plan, p, p);
  }
}

void centered_fft_axis(cplx* data, const std::vector<int>& shape, int axis,
                       bool forward, double spacing_h, double extent_L) {
  const int n = shape[axis];
  long inner = 1, outer = 1;
  for (size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  for (int a = 0; a < axis; ++a) outer *= shape[a];

  // e^{-i k_j x_m} = (-1)^j (-1)^m e^{-i pi n/2} e^{-2pi i jm/n}; n even makes
  // the constant +-1.
  const double c = (n % 4 == 0) ? 1.0 : -1.0;
  const double scale = forward ? spacing_h * c : c / (2.0 * extent_L);

  const long block = static_cast<long>(n) * inner;
  auto alternate = [&](double s) {
    for (long o = 0; o < outer; ++o)
      for (int m = 0; m < n; ++m) {
        const double f = (m % 2 == 0) ? s : -s;
        cplx* row = data + o * block + static_cast<long>(m) * inner;
        for (long i = 0; i < inner; ++i) row[i] *= f;
      }
  };

  alternate(1.0);
  dft_axis(data, shape, axis, forward ? -1 : +1);
  alternate(scale);
}

}  // namespace mflab
