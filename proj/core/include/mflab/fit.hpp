#pragma once
#include <vector>

namespace mflab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// least-squares line through (x_i, y_i)
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// slope of log|y| against log x; skips nothing, throws on nonpositive x or y
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mflab
