#pragma once
#include <functional>
#include <utility>
#include <vector>

namespace mflab {

// Adaptive Gauss-Kronrod 7/15 on [a, b]; bisects until the local error
// estimate meets tol = max(abs_tol, rel_tol * |integral|).
double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-10,
                          double abs_tol = 1e-14, int max_depth = 48);

// Gauss-Legendre nodes and weights on [a, b].
struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};
QuadRule gauss_legendre(int order, double a, double b);

}  // namespace mflab
