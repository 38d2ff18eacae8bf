#include "mflab/hierarchy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

#include "mflab/errors.hpp"
#include "mflab/fft.hpp"
#include "mflab/quadrature.hpp"

namespace mflab {

namespace {

// slot count cap for the stack buffers inside operator closures
constexpr int kMaxRank = 8;

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= double(i);
  return r;
}

// spectral support radius of the interaction weight
double interaction_window(const Potential& u) {
  if (u.atomic()) return std::abs(u.k0);
  return std::sqrt(2.0 * 41.5) / u.sigma;
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b));
}

bool coeffs_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t q = 0; q < a.size(); ++q)
    if (!close(a[q], b[q])) return false;
  return true;
}

bool shape_equal(const ObservableTerm& a, const ObservableTerm& b) {
  if (a.pins.size() != b.pins.size() || a.margs.size() != b.margs.size())
    return false;
  for (std::size_t i = 0; i < a.pins.size(); ++i)
    if (a.pins[i].slot != b.pins[i].slot ||
        !close(a.pins[i].offset, b.pins[i].offset) ||
        !coeffs_equal(a.pins[i].coeff, b.pins[i].coeff))
      return false;
  for (std::size_t i = 0; i < a.margs.size(); ++i)
    if (a.margs[i].axis != b.margs[i].axis ||
        !close(a.margs[i].offset, b.margs[i].offset) ||
        !coeffs_equal(a.margs[i].coeff, b.margs[i].coeff))
      return false;
  return true;
}

// terms sharing pins and measure arguments can be summed before |.| or the
// mu lookup; distinct shapes are disjoint distributions
std::vector<std::vector<int>> group_by_shape(const std::vector<ObservableTerm>& terms) {
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < int(terms.size()); ++i) {
    bool placed = false;
    for (auto& g : groups)
      if (shape_equal(terms[g.front()], terms[i])) {
        g.push_back(i);
        placed = true;
        break;
      }
    if (!placed) groups.push_back({i});
  }
  return groups;
}

}  // namespace

double EtaPin::resolve(const double* xi) const {
  double v = offset;
  for (std::size_t q = 0; q < coeff.size(); ++q) v += coeff[q] * xi[q];
  return v;
}

double MeasureArg::rest(const double* xi) const {
  double v = offset;
  for (std::size_t q = 0; q < coeff.size(); ++q)
    if (int(q) != axis) v += coeff[q] * xi[q];
  return v;
}

std::vector<std::pair<int, double>> FourierObservable::pinned_etas() const {
  std::vector<std::pair<int, double>> out;
  if (terms.empty()) return out;
  for (const EtaPin& p : terms.front().pins)
    out.emplace_back(p.slot, p.coeff[p.slot]);
  return out;
}

void FourierObservable::validate() const {
  const int r = rank();
  if (base_rank < 1 || base_rank > r)
    throw StructuralError("observable: base rank out of range");
  if (r > kMaxRank) throw ArityError("observable: rank above the slot cap");
  for (int a = 0; a < base_rank; ++a)
    if (axis[a] != AxisWeight::plain)
      throw StructuralError("observable: base slots must carry plain axes");
  int n_int = 0;
  for (AxisWeight w : axis) n_int += w == AxisWeight::interaction ? 1 : 0;
  for (const ObservableTerm& t : terms) {
    if (int(t.pins.size()) != r - base_rank)
      throw StructuralError("observable: pin count must match collision slots");
    for (int i = 0; i < int(t.pins.size()); ++i) {
      if (t.pins[i].slot != base_rank + i)
        throw StructuralError("observable: pins must sit on the collision slots");
      if (int(t.pins[i].coeff.size()) != r)
        throw StructuralError("observable: pin coefficient length mismatch");
    }
    if (int(t.margs.size()) != n_int)
      throw StructuralError("observable: one measure argument per interaction axis");
    for (const MeasureArg& m : t.margs) {
      if (m.axis < 0 || m.axis >= r || axis[m.axis] != AxisWeight::interaction)
        throw StructuralError("observable: measure argument off an interaction axis");
      if (int(m.coeff.size()) != r || m.coeff[m.axis] != 1.0)
        throw StructuralError("observable: bad measure argument form");
      for (int b = 0; b < m.axis; ++b)
        if (m.coeff[b] != 0.0)
          throw StructuralError("observable: measure argument must only reach newer axes");
    }
  }
}

FourierObservable gaussian_observable(int ell, double delta1, double delta2,
                                      double epsilon, const Potential& u) {
  if (ell < 1 || ell > kMaxRank) throw ArityError("observable: bad slot count");
  if (!(delta1 > 0.0) || !(delta2 > 0.0))
    throw StructuralError("observable: Gaussian widths must be positive");
  FourierObservable o;
  o.base_rank = ell;
  o.epsilon = epsilon;
  o.u = u;
  o.axis.assign(ell, AxisWeight::plain);
  ObservableTerm t;
  t.f = [ell, delta1, delta2](const double* xi, const double* eta) {
    double s = 0.0;
    for (int j = 0; j < ell; ++j)
      s += 0.25 * (delta1 * delta1 * xi[j] * xi[j] + delta2 * delta2 * eta[j] * eta[j]);
    return cplx(std::exp(-s), 0.0);
  };
  o.terms.push_back(std::move(t));
  o.xi_window = 14.0 / delta1;
  o.eta_window = 14.0 / delta2;
  return o;
}

FourierObservable observable_from_function(
    int ell, double epsilon, const Potential& u,
    std::function<cplx(const double* xi, const double* eta)> f,
    double xi_window, double eta_window) {
  if (ell < 1 || ell > kMaxRank) throw ArityError("observable: bad slot count");
  FourierObservable o;
  o.base_rank = ell;
  o.epsilon = epsilon;
  o.u = u;
  o.axis.assign(ell, AxisWeight::plain);
  o.terms.push_back(ObservableTerm{std::move(f), {}, {}});
  o.xi_window = xi_window;
  o.eta_window = eta_window;
  return o;
}

cplx term_value(const FourierObservable& o, int term, const std::vector<double>& xi,
                const std::vector<double>& eta_full) {
  if (term < 0 || term >= int(o.terms.size()))
    throw ArityError("observable: term index out of range");
  if (int(xi.size()) != o.rank() || int(eta_full.size()) != o.rank())
    throw StructuralError("observable: coordinate count must match the rank");
  return o.terms[term].f(xi.data(), eta_full.data());
}

std::vector<double> resolve_pinned(const FourierObservable& o, int term,
                                   const std::vector<double>& xi,
                                   const std::vector<double>& eta_free) {
  if (term < 0 || term >= int(o.terms.size()))
    throw ArityError("observable: term index out of range");
  if (int(xi.size()) != o.rank() || int(eta_free.size()) != o.base_rank)
    throw StructuralError("observable: coordinate count must match the rank");
  std::vector<double> eta(o.rank(), 0.0);
  std::copy(eta_free.begin(), eta_free.end(), eta.begin());
  for (const EtaPin& p : o.terms[term].pins) eta[p.slot] = p.resolve(xi.data());
  return eta;
}

FourierObservable free_flow(const FourierObservable& o, double t) {
  FourierObservable out = o;
  const int r = o.rank();
  out.terms.clear();
  for (const ObservableTerm& term : o.terms) {
    ObservableTerm nt;
    nt.f = [f = term.f, r, t](const double* xi, const double* eta) {
      std::array<double, kMaxRank> sh;
      for (int i = 0; i < r; ++i) sh[i] = eta[i] - t * xi[i];
      return f(xi, sh.data());
    };
    nt.pins = term.pins;
    nt.margs = term.margs;
    for (EtaPin& p : nt.pins) p.coeff[p.slot] += t;
    out.terms.push_back(std::move(nt));
  }
  out.eta_window = o.eta_window + std::abs(t) * o.xi_window;
  return out;
}

FourierObservable apply_B(const FourierObservable& o, double s) {
  const int m = o.rank();
  if (m + 1 > kMaxRank) throw ArityError("collision: rank above the slot cap");
  FourierObservable out;
  out.base_rank = o.base_rank;
  out.epsilon = o.epsilon;
  out.u = o.u;
  out.axis = o.axis;
  out.axis.push_back(AxisWeight::interaction);
  const double half_eps = 0.5 * o.epsilon;
  const double gain = 2.0 / o.epsilon;
  for (const ObservableTerm& term : o.terms) {
    for (int j = 0; j < m; ++j) {
      ObservableTerm nt;
      nt.f = [f = term.f, j, m, s, half_eps, gain](const double* xi, const double* eta) {
        std::array<double, kMaxRank> xs, es;
        for (int i = 0; i < m; ++i) {
          xs[i] = xi[i];
          es[i] = eta[i];
        }
        xs[j] += xi[m];
        es[j] += s * xi[m];
        const double arg = half_eps * (eta[j] - s * xi[j]) * xi[m];
        return -gain * std::sin(arg) * f(xs.data(), es.data());
      };
      for (const EtaPin& p : term.pins) {
        EtaPin np = p;
        np.coeff.resize(m + 1, 0.0);
        np.coeff[m] = p.coeff[j] - (p.slot == j ? s : 0.0);
        nt.pins.push_back(std::move(np));
      }
      EtaPin fresh;
      fresh.slot = m;
      fresh.coeff.assign(m + 1, 0.0);
      fresh.coeff[m] = s;
      nt.pins.push_back(std::move(fresh));
      for (const MeasureArg& ma : term.margs) {
        MeasureArg nm = ma;
        nm.coeff.resize(m + 1, 0.0);
        nm.coeff[m] = ma.coeff[j];
        nt.margs.push_back(std::move(nm));
      }
      MeasureArg fm;
      fm.axis = m;
      fm.coeff.assign(m + 1, 0.0);
      fm.coeff[m] = 1.0;
      nt.margs.push_back(std::move(fm));
      out.terms.push_back(std::move(nt));
    }
  }
  const double uw = interaction_window(o.u);
  out.xi_window = o.xi_window + uw;
  out.eta_window = o.eta_window + std::abs(s) * uw;
  return out;
}

FourierObservable apply_A(const FourierObservable& o, double s, int measure_order) {
  const int m = o.rank();
  FourierObservable out;
  out.base_rank = o.base_rank;
  out.epsilon = o.epsilon;
  out.u = o.u;
  out.axis = o.axis;
  if (m < 2) {
    out.xi_window = o.xi_window;
    out.eta_window = o.eta_window;
    return out;  // no slot pairs: zero observable
  }
  const std::vector<SpectralAtom> measure =
      o.u.atomic() ? o.u.atoms() : o.u.continuum_measure(measure_order);
  const double half_eps = 0.5 * o.epsilon;
  const double gain = 2.0 * o.epsilon * o.epsilon;  // eps^3 * (2/eps)
  for (const ObservableTerm& term : o.terms) {
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k)
        for (const SpectralAtom& a : measure) {
          if (a.weight == 0.0) continue;
          ObservableTerm nt;
          nt.f = [f = term.f, j, k, m, s, q = a.q, w = a.weight, half_eps,
                  gain](const double* xi, const double* eta) {
            std::array<double, kMaxRank> xs, es;
            for (int i = 0; i < m; ++i) {
              xs[i] = xi[i];
              es[i] = eta[i];
            }
            xs[j] += q;
            xs[k] -= q;
            es[j] += s * q;
            es[k] -= s * q;
            const double arg =
                half_eps * q * ((eta[j] - eta[k]) - s * (xi[j] - xi[k]));
            return -gain * w * std::sin(arg) * f(xs.data(), es.data());
          };
          nt.pins = term.pins;
          for (EtaPin& p : nt.pins)
            p.offset += a.q * (p.coeff[j] - p.coeff[k] -
                               s * ((p.slot == j ? 1.0 : 0.0) -
                                    (p.slot == k ? 1.0 : 0.0)));
          nt.margs = term.margs;
          for (MeasureArg& ma : nt.margs)
            ma.offset += a.q * (ma.coeff[j] - ma.coeff[k]);
          out.terms.push_back(std::move(nt));
        }
  }
  const double uw = interaction_window(o.u);
  out.xi_window = o.xi_window + uw;
  out.eta_window = o.eta_window + std::abs(s) * uw;
  return out;
}

namespace {

// mu with lazily built velocity-side representations along pinned eta axes,
// for exact off-lattice eta evaluation
struct MuInterp {
  MuFunction mu;
  Grid vg;
  std::map<unsigned, std::vector<cplx>> reps;

  explicit MuInterp(MuFunction m)
      : mu(std::move(m)), vg(1, mu.xgrid.points, 0.5 * mu.epsilon * mu.xgrid.dual_extent()) {}

  const std::vector<cplx>& rep(unsigned mask) {
    auto it = reps.find(mask);
    if (it != reps.end()) return it->second;
    const int n = mu.xgrid.points;
    std::vector<cplx> buf = mu.values;
    std::vector<int> shape(2 * mu.rank, n);
    for (int slot = 0; slot < mu.rank; ++slot)
      if (mask & (1u << slot))
        centered_fft_axis(buf.data(), shape, mu.rank + slot, false, vg.spacing(),
                          vg.extent);
    return reps.emplace(mask, std::move(buf)).first->second;
  }
};

cplx pair_with(const FourierObservable& o, MuInterp& mi) {
  o.validate();
  const MuFunction& mu = mi.mu;
  if (o.rank() != mu.rank)
    throw ArityError("pairing: observable and mu rank mismatch");
  if (std::abs(o.epsilon - mu.epsilon) > 1e-9 * (1.0 + std::abs(mu.epsilon)))
    throw StructuralError("pairing: scale mismatch");
  if (o.terms.empty()) return {0.0, 0.0};

  const Grid& g = mu.xgrid;
  const int n = g.points;
  const int r = o.rank();
  const int ell = o.base_rank;
  const int npin = r - ell;
  const double dxi = g.dual_spacing();
  const double deta = 2.0 * g.spacing() / mu.epsilon;
  const double dv = mi.vg.spacing();

  unsigned mask = 0;
  for (int slot = ell; slot < r; ++slot) mask |= 1u << slot;
  const std::vector<cplx>& C = mask ? mi.rep(mask) : mu.values;
  const long pin_block = ipow(n, npin);

  const std::vector<std::vector<int>> groups = group_by_shape(o.terms);
  const std::vector<SpectralAtom> atoms = o.u.atomic() ? o.u.atoms()
                                                       : std::vector<SpectralAtom>{};

  std::array<int, kMaxRank> xb{};
  std::array<double, kMaxRank> xc{};
  std::array<double, 2 * kMaxRank> ec{};  // eta coords, pinned filled per group
  std::vector<cplx> phase(pin_block);

  cplx acc{0.0, 0.0};

  for (const std::vector<int>& grp : groups) {
    const ObservableTerm& t0 = o.terms[grp.front()];

    // recursion over eta axes for one xi point; base carries the multi-index
    std::function<void(int, long, double)> eta_rec = [&](int axis, long base,
                                                         double w) {
      if (axis == ell) {
        cplx fsum{0.0, 0.0};
        for (int ti : grp) fsum += o.terms[ti].f(xc.data(), ec.data());
        if (std::abs(fsum) < 1e-16) return;
        cplx muval{0.0, 0.0};
        if (npin == 0) {
          muval = C[base];
        } else {
          const cplx* blk = C.data() + base * pin_block;
          for (long p = 0; p < pin_block; ++p) muval += blk[p] * phase[p];
        }
        acc += std::conj(fsum) * muval * w;
        return;
      }
      for (int b = 0; b < n; ++b) {
        ec[axis] = (b - n / 2) * deta;
        eta_rec(axis + 1, base * n + b, w * deta);
      }
    };

    // xi axes newest first: displaced measure arguments only reach axes
    // already fixed deeper in the recursion
    std::function<void(int, double)> xi_desc = [&](int axis, double w) {
      if (axis < 0) {
        long base = 0;
        for (int a = 0; a < r; ++a) base = base * n + xb[a];
        for (const EtaPin& p : t0.pins) ec[p.slot] = p.resolve(xc.data());
        if (npin > 0) {
          // trig weights of one off-lattice eta evaluation per pinned axis
          std::array<std::vector<cplx>, kMaxRank> ax;
          for (int i = 0; i < npin; ++i) {
            const double ev = ec[ell + i];
            ax[i].resize(n);
            for (int l = 0; l < n; ++l)
              ax[i][l] = dv * std::exp(cplx(0.0, -ev * (l - n / 2) * dv));
          }
          for (long p = 0; p < pin_block; ++p) {
            long rem = p;
            cplx ph{1.0, 0.0};
            for (int i = npin - 1; i >= 0; --i) {
              ph *= ax[i][rem % n];
              rem /= n;
            }
            phase[p] = ph;
          }
        }
        eta_rec(0, base, w);
        return;
      }
      if (o.axis[axis] == AxisWeight::plain) {
        for (int b = 0; b < n; ++b) {
          xb[axis] = b;
          xc[axis] = g.dual_coord(b);
          xi_desc(axis - 1, w * dxi);
        }
        return;
      }
      const MeasureArg* ma = nullptr;
      for (const MeasureArg& m : t0.margs)
        if (m.axis == axis) ma = &m;
      if (ma == nullptr)
        throw StructuralError("pairing: interaction axis without measure argument");
      const double R = ma->rest(xc.data());
      if (o.u.atomic()) {
        for (const SpectralAtom& at : atoms) {
          if (at.weight == 0.0) continue;
          const double pos = at.q - R;
          const int b = n / 2 + int(std::lround(pos / dxi));
          if (b < 0 || b >= n) continue;
          if (std::abs(g.dual_coord(b) - pos) > 1e-9 * dxi)
            throw ResolutionError("pairing: interaction atom off the dual lattice");
          xb[axis] = b;
          xc[axis] = pos;
          xi_desc(axis - 1, w * at.weight);
        }
        return;
      }
      for (int b = 0; b < n; ++b) {
        const double wq = o.u.fourier(g.dual_coord(b) + R) * dxi;
        if (std::abs(wq) < 1e-18) continue;
        xb[axis] = b;
        xc[axis] = g.dual_coord(b);
        xi_desc(axis - 1, w * wq);
      }
    };

    xi_desc(r - 1, 1.0);
  }
  return acc;
}

}  // namespace

cplx pair_observable_mu(const FourierObservable& o, const MuFunction& mu) {
  MuInterp mi(mu);
  return pair_with(o, mi);
}

double alpha_norm(const FourierObservable& o, const std::vector<int>& alpha,
                  const NormQuad& q) {
  o.validate();
  if (int(alpha.size()) != o.base_rank)
    throw ArityError("norm: one exponent per base slot");
  for (int a : alpha)
    if (a < 0) throw StructuralError("norm: exponents must be nonnegative");
  if (o.terms.empty()) return 0.0;
  const double xw = q.xi_window > 0.0 ? q.xi_window : o.xi_window;
  const double ew = q.eta_window > 0.0 ? q.eta_window : o.eta_window;
  if (!(xw > 0.0) || !(ew > 0.0))
    throw PreconditionError("norm: decay window unknown; set it explicitly");

  const int r = o.rank();
  const int ell = o.base_rank;
  // |.| factors kink at zero: one Gauss-Legendre panel per half axis
  auto split_rule = [](int order, double w) {
    QuadRule left = gauss_legendre(order, -w, 0.0);
    const QuadRule right = gauss_legendre(order, 0.0, w);
    left.x.insert(left.x.end(), right.x.begin(), right.x.end());
    left.w.insert(left.w.end(), right.w.begin(), right.w.end());
    return left;
  };
  const QuadRule gx = split_rule(q.order, xw);
  const QuadRule ge = split_rule(q.order, ew);
  std::vector<SpectralAtom> imeas;
  if (std::any_of(o.axis.begin(), o.axis.end(),
                  [](AxisWeight w) { return w == AxisWeight::interaction; }))
    imeas = o.u.atomic() ? o.u.atoms() : o.u.continuum_measure(q.interaction_order);

  const std::vector<std::vector<int>> groups = group_by_shape(o.terms);

  std::array<double, kMaxRank> xc{};
  std::array<double, 2 * kMaxRank> ec{};
  double acc = 0.0;
  double peak = 0.0;
  double edge_peak = 0.0;

  for (const std::vector<int>& grp : groups) {
    const ObservableTerm& t0 = o.terms[grp.front()];

    std::function<void(int, double, bool)> eta_rec = [&](int axis, double w,
                                                         bool edge) {
      if (axis == ell) {
        cplx fsum{0.0, 0.0};
        for (int ti : grp) fsum += o.terms[ti].f(xc.data(), ec.data());
        double fac = 1.0;
        for (int j = 0; j < ell; ++j) {
          const double base = std::abs(xc[j]) + std::abs(ec[j]);
          for (int p = 0; p < alpha[j]; ++p) fac *= base;
        }
        const double val = std::abs(fsum) * fac;
        peak = std::max(peak, val);
        if (edge) edge_peak = std::max(edge_peak, val);
        acc += w * val;
        return;
      }
      for (int i = 0; i < int(ge.x.size()); ++i) {
        ec[axis] = ge.x[i];
        eta_rec(axis + 1, w * ge.w[i], edge || i == 0 || i + 1 == int(ge.x.size()));
      }
    };

    // xi axes newest first so displaced measure arguments are already fixed
    std::function<void(int, double, bool)> xi_desc = [&](int axis, double w,
                                                         bool edge) {
      if (axis < 0) {
        for (const EtaPin& p : t0.pins) ec[p.slot] = p.resolve(xc.data());
        eta_rec(0, w, edge);
        return;
      }
      if (o.axis[axis] == AxisWeight::plain) {
        for (int i = 0; i < int(gx.x.size()); ++i) {
          xc[axis] = gx.x[i];
          xi_desc(axis - 1, w * gx.w[i],
                  edge || i == 0 || i + 1 == int(gx.x.size()));
        }
        return;
      }
      const MeasureArg* ma = nullptr;
      for (const MeasureArg& m : t0.margs)
        if (m.axis == axis) ma = &m;
      if (ma == nullptr)
        throw StructuralError("norm: interaction axis without measure argument");
      const double R = ma->rest(xc.data());
      for (const SpectralAtom& at : imeas) {
        if (at.weight == 0.0) continue;
        xc[axis] = at.q - R;
        xi_desc(axis - 1, w * std::abs(at.weight), edge);
      }
    };

    xi_desc(r - 1, 1.0, false);
  }
  if (peak > 0.0 && edge_peak > q.decay_tol * peak)
    throw ResolutionError("norm: integrand has not decayed at the window edge");
  return acc;
}

ClosedFormBounds closed_form_bounds(const BoundParameters& p) {
  if (p.kappa1 < 0.0) throw StructuralError("bounds: kappa1 must be nonnegative");
  if (p.ell < 1 || p.n < 0) throw StructuralError("bounds: bad rank or depth");
  ClosedFormBounds out;
  // one kappa1 power cancels against the 1/kappa1 prefactor, keeping the
  // vanishing-interaction limit finite for positive depth
  const double slope = 9.0 * (p.kappa1 + p.kappa2) * (1.0 + 2.0 * p.t);
  out.kappa_t = p.t * p.kappa1 * slope;
  out.K_bound = factorial(p.n) * binomial(p.n + p.ell, p.ell) *
                std::pow(p.C0, p.ell) * std::pow(p.kappa1, p.n - 1) *
                std::pow(slope, p.n);
  out.M_bound =
      p.particles > 0.0 ? (p.ell + p.n - 2) / p.particles * out.K_bound : 0.0;
  out.time_horizon = theorem_horizon(p.kappa1);
  if (out.kappa_t < 1.0 && p.particles > 0.0) {
    const double kt = out.kappa_t;
    const double head = 2.0 * std::pow(2.0 * p.C0, p.ell) *
                        std::pow(p.kappa1, p.n - 1) *
                        std::pow(2.0 * p.t * slope, p.n);
    const double env =
        head + std::pow(p.C0, p.ell) / p.particles *
                   (1.0 + 3.0 * p.t * slope * (p.ell + 2) * (p.ell + 2) *
                              std::pow(1.0 / (1.0 - kt), p.ell + 3));
    if (std::isfinite(env)) out.error_envelope = env;
  }
  return out;
}

double error_envelope_checked(const BoundParameters& p) {
  const ClosedFormBounds b = closed_form_bounds(p);
  if (!b.error_envelope) {
    if (b.kappa_t >= 1.0)
      throw BoundInapplicableError("bounds: kappa_t >= 1, envelope undefined");
    throw BoundInapplicableError("bounds: particle number required for the envelope");
  }
  return *b.error_envelope;
}

double theorem_horizon(double kappa1) {
  if (kappa1 < 0.0) throw StructuralError("bounds: kappa1 must be nonnegative");
  if (kappa1 == 0.0) return std::numeric_limits<double>::infinity();
  return 0.25 * (std::sqrt(1.0 + 1.0 / (7.0 * kappa1 * kappa1)) - 1.0);
}

cplx ExpansionReport::term(const std::string& label) const {
  for (const ExpansionTerm& t : terms)
    if (t.label == label) return t.value;
  throw StructuralError("expansion: no term labelled " + label);
}

namespace {

struct MuCache {
  const MuFamily& family;
  std::map<std::pair<int, long>, std::unique_ptr<MuInterp>> held{};

  MuInterp& get(int rank, double time) {
    if (rank > family.max_rank)
      throw ArityError("expansion: family rank too small for the requested depth");
    const long key = std::lround(time * 1e12);
    auto it = held.find({rank, key});
    if (it == held.end())
      it = held.emplace(std::pair<int, long>{rank, key},
                        std::make_unique<MuInterp>(family.at(rank, time)))
               .first;
    return *it->second;
  }
};

}  // namespace

ExpansionReport duhamel_pair(const FourierObservable& o, const MuFamily& family,
                             int n, double t, int gl_order,
                             const BoundParameters* tail) {
  o.validate();
  if (o.pinned_count() != 0)
    throw PreconditionError("expansion: start from a collision-free observable");
  if (n < 0 || n > 2) throw ArityError("expansion: depth must be 0, 1, or 2");
  if (o.base_rank > 2) throw ArityError("expansion: base rank above 2");
  if (gl_order < 2) throw StructuralError("expansion: quadrature order too small");
  const int ell = o.base_rank;
  if (family.max_rank < ell)
    throw ArityError("expansion: family rank below the observable rank");
  const double eps3 = std::pow(o.epsilon, 3);

  MuCache cache{family};
  ExpansionReport rep;

  const FourierObservable flowed = free_flow(o, t);
  rep.terms.push_back({"free", pair_with(flowed, cache.get(ell, 0.0)), false});

  // depth-n remainder and its finite-size partner share rank ell+n; when the
  // family cannot provide that rank the pair is admissible only if the
  // combined weight 1 - eps^3 (ell+n-1) vanishes
  const double rem_weight = 1.0 - eps3 * (ell + n - 1);
  bool rem_skipped = false;
  if (n >= 1 && ell + n > family.max_rank) {
    if (std::abs(rem_weight) < 1e-12)
      rem_skipped = true;
    else
      throw ArityError("expansion: family rank too small for the requested depth");
  }

  const QuadRule unit = gauss_legendre(gl_order, 0.0, 1.0);
  std::vector<ExpansionTerm> collision, pair_int, finite;

  for (int m = 1; m <= n; ++m) {
    cplx coll{0.0, 0.0}, rem{0.0, 0.0}, pint{0.0, 0.0}, fin{0.0, 0.0};
    // tensor rule on the unit cube mapped to the ordered simplex
    std::vector<int> idx(m, 0);
    for (;;) {
      double w = 1.0;
      std::array<double, 4> s{};
      double prev = t;
      for (int k = 0; k < m; ++k) {
        s[k] = prev * unit.x[idx[k]];
        w *= unit.w[idx[k]] * prev;
        prev = s[k];
      }
      FourierObservable chain_prev = flowed;
      for (int k = 0; k + 1 < m; ++k) chain_prev = apply_B(chain_prev, s[k]);
      const double sm = s[m - 1];

      const FourierObservable a_out = apply_A(chain_prev, sm);
      if (!a_out.terms.empty())
        pint += w * pair_with(free_flow(a_out, -sm), cache.get(ell + m - 1, sm));

      const bool need_chain =
          (m < n) || (m == n && !rem_skipped);
      if (need_chain) {
        const FourierObservable chain = apply_B(chain_prev, sm);
        if (m < n) {
          coll += w * pair_with(chain, cache.get(ell + m, 0.0));
          fin += w * pair_with(free_flow(chain, -sm), cache.get(ell + m, sm));
        } else {
          rem += w * pair_with(free_flow(chain, -sm), cache.get(ell + m, sm));
        }
      }

      int d = m - 1;
      while (d >= 0 && ++idx[d] == gl_order) idx[d--] = 0;
      if (d < 0) break;
    }

    if (m < n)
      collision.push_back({"collision[" + std::to_string(m) + "]", coll, false});
    pair_int.push_back({"pair_interaction[" + std::to_string(m) + "]", pint, false});
    const double fw = -eps3 * (ell + m - 1);
    if (m < n) {
      finite.push_back({"finite_size[" + std::to_string(m) + "]", fw * fin, false});
    } else {
      rep.terms.push_back({"remainder", rem, rem_skipped});
      finite.push_back({"finite_size[" + std::to_string(m) + "]", fw * rem,
                        rem_skipped});
    }
  }
  for (auto& e : collision) rep.terms.push_back(std::move(e));
  for (auto& e : pair_int) rep.terms.push_back(std::move(e));
  for (auto& e : finite) rep.terms.push_back(std::move(e));

  rep.value = {0.0, 0.0};
  for (const ExpansionTerm& e : rep.terms) rep.value += e.value;

  if (tail != nullptr) {
    BoundParameters p = *tail;
    p.ell = ell;
    p.n = n;
    p.t = t;
    const double kt = 9.0 * p.kappa1 * p.t * (1.0 + 2.0 * p.t) * (p.kappa1 + p.kappa2);
    if (kt >= 1.0) {
      rep.bound_error = "kappa_t >= 1: geometric tail estimate inapplicable";
    } else {
      double head = 0.0;
      for (int m = 0; m <= n; ++m) head += binomial(m + ell, ell) * std::pow(kt, m);
      rep.geometric_tail = std::pow(p.C0, ell) / p.kappa1 *
                           (std::pow(1.0 - kt, -(ell + 1)) - head);
    }
  }
  return rep;
}

bool BoundReport::all_within(double slack) const {
  for (const BoundSample& s : samples) {
    if (s.K_numeric > slack * s.K_bound && s.K_bound > 0.0) return false;
    if (s.K_bound == 0.0 && s.K_numeric > 1e-12) return false;
    if (s.M_numeric > slack * s.M_bound && s.M_bound > 0.0) return false;
    if (s.M_bound == 0.0 && s.M_numeric > 1e-12) return false;
  }
  return true;
}

BoundReport bound_verification(int ell, int n, const Potential& u,
                               double delta1, double delta2, double epsilon,
                               double t, double kappa2, double C0,
                               int simplex_samples, const NormQuad& q) {
  if (ell < 1 || ell > 2) throw ArityError("bounds: base rank must be 1 or 2");
  if (n < 1 || n > 2) throw ArityError("bounds: depth must be 1 or 2");
  if (simplex_samples < 1) throw StructuralError("bounds: need at least one sample");
  if (!(kappa2 > 0.0)) throw StructuralError("bounds: kappa2 must be positive");

  BoundReport rep;
  rep.ell = ell;
  rep.n = n;
  rep.t = t;
  rep.kappa1 = kappa1(u);
  rep.kappa2 = kappa2;

  if (C0 <= 0.0) {
    // smallest constant with per-slot norms <= C0 kappa2^a a! up to a = 4
    const FourierObservable slot = gaussian_observable(1, delta1, delta2, epsilon, u);
    C0 = 0.0;
    double afac = 1.0;
    for (int a = 0; a <= 4; ++a) {
      if (a > 0) afac *= a;
      C0 = std::max(C0, alpha_norm(slot, {a}, q) / (std::pow(kappa2, a) * afac));
    }
  }
  rep.C0 = C0;

  BoundParameters bp;
  bp.kappa1 = rep.kappa1;
  bp.kappa2 = kappa2;
  bp.C0 = C0;
  bp.t = t;
  bp.ell = ell;
  bp.n = n;
  const double K_bound = closed_form_bounds(bp).K_bound;
  const double M_bound = std::pow(epsilon, 3) * (ell + n - 2) * K_bound;

  const FourierObservable base = gaussian_observable(ell, delta1, delta2, epsilon, u);
  const FourierObservable flowed = free_flow(base, t);
  const QuadRule nodes = gauss_legendre(simplex_samples, 0.0, t);
  const double inner = 0.5 * (3.0 - std::sqrt(5.0));  // fixed interior fraction

  for (int i = 0; i < simplex_samples; ++i) {
    BoundSample smp;
    smp.s.push_back(nodes.x[i]);
    if (n == 2) smp.s.push_back(inner * nodes.x[i]);
    FourierObservable chain_prev = flowed;
    for (int k = 0; k + 1 < n; ++k) chain_prev = apply_B(chain_prev, smp.s[k]);
    const double sn = smp.s[n - 1];
    const std::vector<int> zero(ell, 0);
    smp.K_numeric = alpha_norm(apply_B(chain_prev, sn), zero, q);
    smp.M_numeric = alpha_norm(apply_A(chain_prev, sn, q.interaction_order), zero, q);
    smp.K_bound = K_bound;
    smp.M_bound = M_bound;
    rep.samples.push_back(std::move(smp));
  }
  return rep;
}

}  // namespace mflab
