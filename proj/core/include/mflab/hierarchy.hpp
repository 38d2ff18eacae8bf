#pragma once
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mflab/field.hpp"
#include "mflab/mu.hpp"
#include "mflab/potential.hpp"

namespace mflab {

// Linear constraint eta_slot = offset + sum_q coeff[q] xi_q. A collision at
// time s creates the diagonal pin eta_new = s xi_new; later operators shift
// arguments, so the form picks up cross coefficients and atom offsets.
struct EtaPin {
  int slot = 0;
  double offset = 0.0;
  std::vector<double> coeff;  // length = observable rank

  double resolve(const double* xi) const;
};

// measure carried by a xi axis when integrated: plain Lebesgue dxi, or the
// interaction weight Uhat introduced by a collision
enum class AxisWeight { plain, interaction };

// argument of the Uhat factor on one interaction axis: offset + sum coeff[b]
// xi_b with coeff[axis] = 1. Operators that shift the axis variable displace
// this form, so coeff picks up entries on newer axes only.
struct MeasureArg {
  int axis = 0;
  double offset = 0.0;
  std::vector<double> coeff;

  double rest(const double* xi) const;  // form value minus the xi_axis part
};

// one summand of an observable: a smooth factor over the full (xi, eta)
// coordinates times the delta constraints in pins times the Uhat factors in
// margs (one per interaction axis)
struct ObservableTerm {
  std::function<cplx(const double* xi, const double* eta)> f;
  std::vector<EtaPin> pins;
  std::vector<MeasureArg> margs;
};

// Fourier-side test observable O(xi_1..xi_rank; eta_1..eta_rank). The first
// base_rank slots are free in eta; the remaining slots were created by
// collisions and carry pinned eta plus an interaction-weighted xi axis.
struct FourierObservable {
  int base_rank = 1;
  double epsilon = 1.0;
  Potential u;                   // interaction attached to collision slots
  std::vector<AxisWeight> axis;  // per xi slot
  std::vector<ObservableTerm> terms;
  double xi_window = 0.0;   // decay windows for continuum quadrature
  double eta_window = 0.0;

  int rank() const { return int(axis.size()); }
  int pinned_count() const { return rank() - base_rank; }

  // (slot, diagonal coefficient) view of the pins; the diagonal entry of a
  // fresh pin is its collision time and free flow adds t to it
  std::vector<std::pair<int, double>> pinned_etas() const;

  void validate() const;
};

// product Gaussian exp(-delta1^2 xi^2/4) exp(-delta2^2 eta^2/4) over ell slots
FourierObservable gaussian_observable(int ell, double delta1, double delta2,
                                      double epsilon, const Potential& u);

// custom base observable from a smooth factor (no pins)
FourierObservable observable_from_function(
    int ell, double epsilon, const Potential& u,
    std::function<cplx(const double* xi, const double* eta)> f,
    double xi_window, double eta_window);

// evaluate one term's smooth factor at explicit full coordinates (pins are
// the caller's responsibility; see resolve_pinned)
cplx term_value(const FourierObservable& o, int term, const std::vector<double>& xi,
                const std::vector<double>& eta_full);

// fill pinned components of eta from the term's constraints
std::vector<double> resolve_pinned(const FourierObservable& o, int term,
                                   const std::vector<double>& xi,
                                   const std::vector<double>& eta_free);

// free flow: O(xi, eta) -> O(xi, eta - t xi); pins gain t on their diagonal
FourierObservable free_flow(const FourierObservable& o, double t);

// collision at time s, conjugated by the free flow: adds one interaction
// slot pinned at eta_new = s xi_new, sums over the struck slot j with factor
// -(2/eps) sin((eps/2)(eta_j - s xi_j) xi_new) and shifts xi_j by xi_new,
// eta_j by s xi_new. The Uhat(xi_new) weight lives on the new axis measure.
FourierObservable apply_B(const FourierObservable& o, double s);

// pair interaction term at time s, conjugated by the free flow: same rank,
// sum over slot pairs j < k and over the interaction measure in q with factor
// -eps^3 (2/eps) sin((eps/2) q ((eta_j - eta_k) - s (xi_j - xi_k))), xi_j,k
// shifted by +-q and eta_j,k by +-s q. measure_order controls the q rule for
// the smooth interaction kind.
FourierObservable apply_A(const FourierObservable& o, double s,
                          int measure_order = 24);

// lattice pairing <O, mu> = integral of conj(O) mu over free slots, with
// pinned eta resolved by exact trigonometric evaluation of mu off-lattice
cplx pair_observable_mu(const FourierObservable& o, const MuFunction& mu);

// continuum quadrature controls for norms and bound checks
struct NormQuad {
  int order = 48;             // Gauss-Legendre points per plain axis
  int interaction_order = 32; // points on interaction axes (smooth kind)
  double xi_window = 0.0;     // 0: take the observable's window
  double eta_window = 0.0;
  double decay_tol = 1e-7;    // boundary-to-peak ratio demanded of the integrand
};

// ||O||_alpha = int |O| prod_j (|xi_j| + |eta_j|)^alpha_j over free slots,
// alpha indexed over the base slots; pinned slots resolved first
double alpha_norm(const FourierObservable& o, const std::vector<int>& alpha,
                  const NormQuad& q = {});

struct BoundParameters {
  double kappa1 = 0.0;  // interaction moment scale
  double kappa2 = 0.0;  // observable decay scale
  double C0 = 1.0;      // observable constant
  double t = 0.0;
  int ell = 1;
  int n = 1;
  // particle number; the collision hierarchy ties eps^3 = 1/particles, which
  // sets both the pair-term prefactor and the finite-size envelope term
  double particles = 0.0;
};

struct ClosedFormBounds {
  double kappa_t = 0.0;
  double K_bound = 0.0;
  double M_bound = 0.0;
  double time_horizon = 0.0;
  std::optional<double> error_envelope;  // empty when kappa_t >= 1
};

ClosedFormBounds closed_form_bounds(const BoundParameters& p);

// envelope value or BoundInapplicableError when kappa_t >= 1
double error_envelope_checked(const BoundParameters& p);

// largest time with a convergent collision expansion for moment scale kappa1
double theorem_horizon(double kappa1);

// mu^(rank)(time) provider backing a truncated expansion; at() must accept
// rank <= max_rank and 0 <= time <= t
struct MuFamily {
  int max_rank = 0;
  std::function<MuFunction(int rank, double time)> at;
};

struct ExpansionTerm {
  std::string label;
  cplx value{0.0, 0.0};
  bool skipped_zero_weight = false;  // rank above the family, weight exactly 0
};

struct ExpansionReport {
  cplx value{0.0, 0.0};
  std::vector<ExpansionTerm> terms;
  std::optional<double> geometric_tail;  // tail estimate when requested
  std::string bound_error;               // set when the tail bound is inapplicable

  cplx term(const std::string& label) const;
};

// truncated collision expansion of <O, mu^(ell)(t)> to depth n: free term,
// collision chains against mu(0), the depth-n remainder, pair-interaction
// terms, and the finite-size corrections, each integrated over its time
// simplex with a tensor Gauss-Legendre rule of the given order per axis.
// tail, when given, requests the geometric tail estimate of the dropped
// depths; kappa_t >= 1 leaves it empty and sets bound_error.
ExpansionReport duhamel_pair(const FourierObservable& o, const MuFamily& family,
                             int n, double t, int gl_order = 8,
                             const BoundParameters* tail = nullptr);

struct BoundSample {
  std::vector<double> s;  // simplex node, decreasing
  double K_numeric = 0.0;
  double K_bound = 0.0;
  double M_numeric = 0.0;
  double M_bound = 0.0;
};

struct BoundReport {
  int ell = 1;
  int n = 1;
  double t = 0.0;
  double C0 = 0.0;      // fitted observable constant used in the bound
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  std::vector<BoundSample> samples;

  bool all_within(double slack = 1.0) const;
};

// quadrature K and M chain norms at sampled time simplices against their
// closed-form bounds, for the Gaussian observable family. C0 <= 0 fits the
// observable constant from alpha norms.
BoundReport bound_verification(int ell, int n, const Potential& u,
                               double delta1, double delta2, double epsilon,
                               double t, double kappa2, double C0,
                               int simplex_samples, const NormQuad& q = {});

}  // namespace mflab
