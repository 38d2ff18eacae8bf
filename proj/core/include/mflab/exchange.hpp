#pragma once
#include <array>
#include <vector>

namespace mflab {

// Exchange-term pairings for 3-d momentum shells, evaluated as pure lattice
// sums over integer modes (no 3-d grids). Observables are factored
// J = J1(x) J2(v) with Gaussian profiles reduced to closed Fourier factors:
//   J1hat(d) = exp(-sx^2 |d|^2 / 2)   at the difference k - l
//   J2 tilde = exp(-sv^2 |u|^2 / 2)   at the midpoint velocity u = eps(k+l)/2
namespace exchange3d {

using Mode = std::array<int, 3>;

// integer modes with |k| <= radius
std::vector<Mode> fermi_modes(double radius);

// (1/N^2) sum_{k,l} J1hat(k-l) J2tilde(eps(k+l)/2)
double smooth_exchange(const std::vector<Mode>& modes, double sx, double sv, double eps);

// (1/N^2) sum_{k != l} |k-l|^{-2}
double coulomb_exchange(const std::vector<Mode>& modes);

// single Fourier mode J1 = e^{iqx}: (1/N^2) sum_{k-l=q} J2tilde(eps(k+l)/2)
double single_mode_exchange(const std::vector<Mode>& modes, const Mode& q, double sv, double eps);

// direct term <J, W1 (x) W1> for the same factored observable
double product_pairing(const std::vector<Mode>& modes, double sv, double eps);

// |<J, W2 - W1 (x) W1>| for the Slater shell state
double factorization_defect(const std::vector<Mode>& modes, double sx, double sv, double eps);

}  // namespace exchange3d
}  // namespace mflab
