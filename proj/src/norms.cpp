#include "wavekin/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wavekin/fft.hpp"
#include "wavekin/grid.hpp"
#include "wavekin/scintillation.hpp"

namespace wavekin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_p(double p) {
  if (p != 1.0 && p != 2.0 && !(p == kInf))
    throw std::invalid_argument("norms: p must be 1, 2 or infinity");
}

void check_decay(const FourierGridFn& g) {
  if (g.decay_ratio() > 1e-6)
    throw std::runtime_error("norms: insufficient boundary decay on the grid");
}

// Product of axis counts over [lo, hi).
long block_size(const std::vector<AxisSpec>& axes, int lo, int hi) {
  long n = 1;
  for (int i = lo; i < hi; ++i) n *= axes[i].n;
  return n;
}

double block_cell(const std::vector<AxisSpec>& axes, int lo, int hi) {
  double c = 1.0;
  for (int i = lo; i < hi; ++i) c *= axes[i].step;
  return c;
}

}  // namespace

AxisSpec centered_axis(int n, double step) {
  if (n < 1 || step <= 0.0) throw std::invalid_argument("centered_axis: bad n or step");
  return AxisSpec{n, -0.5 * (n - 1) * step, step};
}

long FourierGridFn::size() const { return block_size(axes, 0, static_cast<int>(axes.size())); }

long FourierGridFn::stride(int axis) const {
  return block_size(axes, axis + 1, static_cast<int>(axes.size()));
}

double FourierGridFn::decay_ratio() const {
  const int na = static_cast<int>(axes.size());
  double peak = 0.0, boundary = 0.0;
  std::vector<int> idx(na);
  for (long flat = 0; flat < size(); ++flat) {
    long rem = flat;
    bool edge = false;
    for (int a = na - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % axes[a].n);
      rem /= axes[a].n;
      if (idx[a] == 0 || idx[a] == axes[a].n - 1) edge = true;
    }
    double m = std::abs(values[flat]);
    peak = std::max(peak, m);
    if (edge) boundary = std::max(boundary, m);
  }
  return peak > 0.0 ? boundary / peak : 0.0;
}

FourierGridFn sample_fourier(
    const std::vector<AxisSpec>& axes,
    const std::function<std::complex<double>(const Eigen::VectorXd&)>& f) {
  FourierGridFn g;
  g.axes = axes;
  g.values.resize(g.size());
  const int na = static_cast<int>(axes.size());
  Eigen::VectorXd z(na);
  for (long flat = 0; flat < g.size(); ++flat) {
    long rem = flat;
    for (int a = na - 1; a >= 0; --a) {
      z[a] = axes[a].coord(static_cast<int>(rem % axes[a].n));
      rem /= axes[a].n;
    }
    g.values[flat] = f(z);
  }
  return g;
}

double norm_Yp(const FourierGridFn& g, double p) {
  check_p(p);
  check_decay(g);
  if (g.axes.size() % 2 != 0) throw std::invalid_argument("norm_Yp: need (u, xi) axes");
  const int d = static_cast<int>(g.axes.size()) / 2;
  const long nu = block_size(g.axes, 0, d);
  const long nx = block_size(g.axes, d, 2 * d);
  if (p == kInf) return g.values.abs().maxCoeff();
  const double du = block_cell(g.axes, 0, d);
  double acc = 0.0;
  for (long iu = 0; iu < nu; ++iu) {
    double sup = 0.0;
    for (long ix = 0; ix < nx; ++ix) sup = std::max(sup, std::abs(g.values[iu * nx + ix]));
    acc += (p == 1.0 ? sup : sup * sup) * du;
  }
  return p == 1.0 ? acc : std::sqrt(acc);
}

double norm_Y(const FourierGridFn& g) {
  check_decay(g);
  if (g.axes.size() % 2 != 0) throw std::invalid_argument("norm_Y: need (u, xi) axes");
  const int d = static_cast<int>(g.axes.size()) / 2;
  const long nu = block_size(g.axes, 0, d);
  const long nx = block_size(g.axes, d, 2 * d);
  const double du = block_cell(g.axes, 0, d);
  double sup = 0.0;
  for (long ix = 0; ix < nx; ++ix) {
    double acc = 0.0;
    for (long iu = 0; iu < nu; ++iu) acc += std::abs(g.values[iu * nx + ix]) * du;
    sup = std::max(sup, acc);
  }
  return sup;
}

double norm_Xp(const FourierGridFn& h, double p) {
  check_p(p);
  check_decay(h);
  if (h.axes.size() % 4 != 0) throw std::invalid_argument("norm_Xp: need (u, xi, v, zeta) axes");
  const int d = static_cast<int>(h.axes.size()) / 4;
  const long nu = block_size(h.axes, 0, d);
  const long nx = block_size(h.axes, d, 2 * d);
  const long nv = block_size(h.axes, 2 * d, 3 * d);
  const long nz = block_size(h.axes, 3 * d, 4 * d);
  if (p == kInf) return h.values.abs().maxCoeff();
  const double du = block_cell(h.axes, 0, d);
  double best = 0.0;
  for (long iv = 0; iv < nv; ++iv)
    for (long iz = 0; iz < nz; ++iz) {
      double acc = 0.0;
      for (long iu = 0; iu < nu; ++iu) {
        double sup = 0.0;
        for (long ix = 0; ix < nx; ++ix) {
          long flat = ((iu * nx + ix) * nv + iv) * nz + iz;
          sup = std::max(sup, std::abs(h.values[flat]));
        }
        acc += (p == 1.0 ? sup : sup * sup) * du;
      }
      best = std::max(best, acc);
    }
  return p == 1.0 ? best : std::sqrt(best);
}

double IdentityReport::max_mismatch() const {
  return std::max(std::max(transport_mismatch, collision_mismatch),
                  std::max(doubled_transport_mismatch, doubled_collision_mismatch));
}

namespace {

int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }
int wrap_index(long i, int n) {
  long m = i % n;
  return static_cast<int>(m < 0 ? m + n : m);
}

double rel_max_diff(const std::vector<std::complex<double>>& a,
                    const std::vector<std::complex<double>>& b) {
  double diff = 0.0, ref = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    ref = std::max(ref, std::abs(b[i]));
  }
  return ref > 0.0 ? diff / ref : diff;
}

int shear_cells(double t, double dk, double dx) {
  double c = t * dk / dx;
  double r = std::round(c);
  if (std::abs(c - r) > 1e-9)
    throw std::invalid_argument("fourier_identities_check: shear t*dk/dx is not a whole "
                                "number of cells (shear aliasing)");
  return static_cast<int>(r);
}

// Direct quadrature of the collision integral along one momentum axis:
// (2 pi)^{-1} sum_j' Rhat((m_j - m_j') dk) phi(j') dk, true (unwrapped)
// coordinate differences.
void collision_axis(const CorrelationModel& model, double dk, int n,
                    const std::complex<double>* in, long stride, std::complex<double>* out,
                    long out_stride) {
  for (int j = 0; j < n; ++j) {
    std::complex<double> acc = 0.0;
    int mj = signed_index(j, n);
    for (int j2 = 0; j2 < n; ++j2) {
      double dkk = (mj - signed_index(j2, n)) * dk;
      acc += spectrum_eval_r2(model, dkk * dkk) * in[j2 * stride];
    }
    out[j * out_stride] = acc * (dk / kTwoPi);
  }
}

}  // namespace

IdentityReport fourier_identities_check(const CorrelationModel& model, double t) {
  model.validate();
  if (model.dim != 1)
    throw std::invalid_argument("fourier_identities_check: model.dim must be 1");
  IdentityReport rep;

  // --- free transport, two factors: F G_t phi = F phi(u, xi + t u) ------
  {
    const int n = 64;
    const double dx = 0.25, dk = 0.5;
    const int c = shear_cells(t, dk, dx);
    std::vector<std::complex<double>> a(static_cast<size_t>(n) * n), sh(a.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double x = signed_index(i, n) * dx, k = signed_index(j, n) * dk;
        a[static_cast<size_t>(i) * n + j] =
            std::exp(-0.5 * (x * x + (k - 0.2) * (k - 0.2)));
      }
    // G_t phi (x, k) = phi(x - t k, k): circular shift by c * m_j cells.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int src = wrap_index(i - static_cast<long>(c) * signed_index(j, n), n);
        sh[static_cast<size_t>(i) * n + j] = a[static_cast<size_t>(src) * n + j];
      }
    multi_fft(a.data(), {n, n}, true);
    multi_fft(sh.data(), {n, n}, true);
    std::vector<std::complex<double>> rhs(a.size());
    for (int ia = 0; ia < n; ++ia)
      for (int ib = 0; ib < n; ++ib)
        rhs[static_cast<size_t>(ia) * n + ib] =
            a[static_cast<size_t>(ia) * n + wrap_index(ib + static_cast<long>(c) * ia, n)];
    rep.transport_mismatch = rel_max_diff(sh, rhs);
  }

  // --- collision, two factors: F Q phi = R(xi) F phi --------------------
  {
    const int nx = 32, nk = 64;
    const double dx = 0.5, dk = 0.5;
    std::vector<std::complex<double>> a(static_cast<size_t>(nx) * nk), q(a.size());
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nk; ++j) {
        double x = signed_index(i, nx) * dx, k = signed_index(j, nk) * dk;
        a[static_cast<size_t>(i) * nk + j] = std::exp(-0.5 * (x * x + k * k));
      }
    for (int i = 0; i < nx; ++i)
      collision_axis(model, dk, nk, &a[static_cast<size_t>(i) * nk], 1,
                     &q[static_cast<size_t>(i) * nk], 1);
    multi_fft(a.data(), {nx, nk}, true);
    multi_fft(q.data(), {nx, nk}, true);
    const double dxi = kTwoPi / (nk * dk);
    std::vector<std::complex<double>> rhs(a.size());
    for (int ia = 0; ia < nx; ++ia)
      for (int ib = 0; ib < nk; ++ib) {
        double xi = signed_index(ib, nk) * dxi;
        rhs[static_cast<size_t>(ia) * nk + ib] =
            correlation_eval_r2(model, xi * xi) * a[static_cast<size_t>(ia) * nk + ib];
      }
    rep.collision_mismatch = rel_max_diff(q, rhs);
  }

  // --- free transport, four factors ---------------------------------------
  {
    // With distinct axis lengths the xi-index shift per u-mode is
    // c * nk / nx, which must itself be integral for the re-indexing to be
    // exact.
    const int nx = 16, nk = 32;
    const double dx = 0.5, dk = 1.0;
    const int c = shear_cells(t, dk, dx);
    if ((static_cast<long>(c) * nk) % nx != 0)
      throw std::invalid_argument("fourier_identities_check: doubled shear off-lattice");
    const int cf = static_cast<int>(static_cast<long>(c) * nk / nx);
    const size_t total = static_cast<size_t>(nx) * nk * nx * nk;
    std::vector<std::complex<double>> a(total), sh(total);
    auto flat = [&](int i, int j, int l, int r) {
      return ((static_cast<size_t>(i) * nk + j) * nx + l) * nk + r;
    };
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nk; ++j)
        for (int l = 0; l < nx; ++l)
          for (int r = 0; r < nk; ++r) {
            double x = signed_index(i, nx) * dx, k = signed_index(j, nk) * dk;
            double y = signed_index(l, nx) * dx, p = signed_index(r, nk) * dk;
            a[flat(i, j, l, r)] = std::exp(-0.5 * (x * x + k * k + y * y + p * p));
          }
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nk; ++j)
        for (int l = 0; l < nx; ++l)
          for (int r = 0; r < nk; ++r) {
            int si = wrap_index(i - static_cast<long>(c) * signed_index(j, nk), nx);
            int sl = wrap_index(l - static_cast<long>(c) * signed_index(r, nk), nx);
            sh[flat(i, j, l, r)] = a[flat(si, j, sl, r)];
          }
    multi_fft(a.data(), {nx, nk, nx, nk}, true);
    multi_fft(sh.data(), {nx, nk, nx, nk}, true);
    std::vector<std::complex<double>> rhs(total);
    for (int ia = 0; ia < nx; ++ia)
      for (int ib = 0; ib < nk; ++ib)
        for (int ie = 0; ie < nx; ++ie)
          for (int io = 0; io < nk; ++io)
            rhs[flat(ia, ib, ie, io)] =
                a[flat(ia, wrap_index(ib + static_cast<long>(cf) * ia, nk), ie,
                       wrap_index(io + static_cast<long>(cf) * ie, nk))];
    rep.doubled_transport_mismatch = rel_max_diff(sh, rhs);
  }

  // --- collision, four factors: F Q2 phi = (R(xi) + R(zeta)) F phi --------
  {
    // The quadrature window must reach far enough that the one-sided tail
    // deficit exp(-(nk dk / 4)^2) stays below the target tolerance.
    const int nx = 8, nk = 64;
    const double dx = 0.5, dk = 0.5;
    const size_t total = static_cast<size_t>(nx) * nk * nx * nk;
    std::vector<std::complex<double>> a(total), q(total, 0.0), part(total);
    auto flat = [&](int i, int j, int l, int r) {
      return ((static_cast<size_t>(i) * nk + j) * nx + l) * nk + r;
    };
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nk; ++j)
        for (int l = 0; l < nx; ++l)
          for (int r = 0; r < nk; ++r) {
            double x = signed_index(i, nx) * dx, k = signed_index(j, nk) * dk;
            double y = signed_index(l, nx) * dx, p = signed_index(r, nk) * dk;
            a[flat(i, j, l, r)] = std::exp(-0.5 * (x * x + k * k + y * y + p * p));
          }
    // Q acting on k (axis 1) plus Q acting on p (axis 3).
    for (int i = 0; i < nx; ++i)
      for (int l = 0; l < nx; ++l)
        for (int r = 0; r < nk; ++r)
          collision_axis(model, dk, nk, &a[flat(i, 0, l, r)],
                         static_cast<long>(nx) * nk, &part[flat(i, 0, l, r)],
                         static_cast<long>(nx) * nk);
    for (size_t i = 0; i < total; ++i) q[i] += part[i];
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nk; ++j)
        for (int l = 0; l < nx; ++l)
          collision_axis(model, dk, nk, &a[flat(i, j, l, 0)], 1, &part[flat(i, j, l, 0)], 1);
    for (size_t i = 0; i < total; ++i) q[i] += part[i];
    multi_fft(a.data(), {nx, nk, nx, nk}, true);
    multi_fft(q.data(), {nx, nk, nx, nk}, true);
    const double dxi = kTwoPi / (nk * dk);
    std::vector<std::complex<double>> rhs(total);
    for (int ia = 0; ia < nx; ++ia)
      for (int ib = 0; ib < nk; ++ib)
        for (int ie = 0; ie < nx; ++ie)
          for (int io = 0; io < nk; ++io) {
            double xi = signed_index(ib, nk) * dxi, zeta = signed_index(io, nk) * dxi;
            rhs[flat(ia, ib, ie, io)] =
                (correlation_eval_r2(model, xi * xi) + correlation_eval_r2(model, zeta * zeta)) *
                a[flat(ia, ib, ie, io)];
          }
    rep.doubled_collision_mismatch = rel_max_diff(q, rhs);
  }

  return rep;
}

namespace {

// Scan extents for the random-mixture test family (widths >= 0.8 make the
// Fourier transforms negligible beyond |s| ~ 8.5 per axis).
constexpr double kMixExtent = 8.5;
constexpr double kScanDu = 1.0;
constexpr double kScanDxi = 0.75;

struct TripleNorm {
  double p1 = 0.0, p2 = 0.0, pinf = 0.0;
  double get(double p) const { return p == 1.0 ? p1 : (p == 2.0 ? p2 : pinf); }
};

// X_p norms of F h sampled by a callable over a (u, xi, v, zeta) scan with a
// v range and a u window of half-width uwin centered on ucenter_slope * v
// (slope -1 follows the anti-diagonal support ridge of K_eta outputs; slope 0
// scans a plain box).
template <typename F>
TripleNorm scan_Xp(const F& fh, double vmax, double uwin, double ucenter_slope) {
  TripleNorm out;
  const int nv = static_cast<int>(std::floor(2.0 * vmax / kScanDu)) + 1;
  const int nu = static_cast<int>(std::floor(2.0 * uwin / kScanDu)) + 1;
  const int nx = static_cast<int>(std::floor(2.0 * kMixExtent / kScanDxi)) + 1;
  double best1 = 0.0, best2 = 0.0, sup = 0.0;
  for (int jv = 0; jv < nv; ++jv) {
    const double v = -vmax + jv * kScanDu;
    for (int jz = 0; jz < nx; ++jz) {
      const double zeta = -kMixExtent + jz * kScanDxi;
      double acc1 = 0.0, acc2 = 0.0;
      for (int ju = 0; ju < nu; ++ju) {
        const double u = ucenter_slope * v - uwin + ju * kScanDu;
        double s = 0.0;
        for (int jx = 0; jx < nx; ++jx) {
          const double xi = -kMixExtent + jx * kScanDxi;
          s = std::max(s, std::abs(fh(u, xi, v, zeta)));
        }
        acc1 += s * kScanDu;
        acc2 += s * s * kScanDu;
        sup = std::max(sup, s);
      }
      best1 = std::max(best1, acc1);
      best2 = std::max(best2, acc2);
    }
  }
  out.p1 = best1;
  out.p2 = std::sqrt(best2);
  out.pinf = sup;
  return out;
}

// Y_p and Y norms of a 2-axis mixture Fourier transform on a [-E, E]^2 scan.
void scan_Y(const GaussianMixture& g, TripleNorm* yp, double* y) {
  const int nu = static_cast<int>(std::floor(2.0 * kMixExtent / kScanDu)) + 1;
  const int nx = static_cast<int>(std::floor(2.0 * kMixExtent / kScanDxi)) + 1;
  Eigen::VectorXd s(2);
  std::vector<double> colsum(nx, 0.0);
  double acc1 = 0.0, acc2 = 0.0, sup = 0.0;
  for (int ju = 0; ju < nu; ++ju) {
    s[0] = -kMixExtent + ju * kScanDu;
    double rowsup = 0.0;
    for (int jx = 0; jx < nx; ++jx) {
      s[1] = -kMixExtent + jx * kScanDxi;
      double m = std::abs(g.fourier(s));
      rowsup = std::max(rowsup, m);
      colsum[jx] += m * kScanDu;
    }
    acc1 += rowsup * kScanDu;
    acc2 += rowsup * rowsup * kScanDu;
    sup = std::max(sup, rowsup);
  }
  yp->p1 = acc1;
  yp->p2 = std::sqrt(acc2);
  yp->pinf = sup;
  *y = *std::max_element(colsum.begin(), colsum.end());
}

}  // namespace

std::vector<Lemma31Report> verify_lemma31_multi(const CorrelationModel& model, double eta,
                                                const std::vector<double>& ps, int trials,
                                                LemmaMode mode, std::uint64_t seed) {
  for (double p : ps) check_p(p);
  model.validate();
  if (model.dim != 1) throw std::invalid_argument("verify_lemma31: model.dim must be 1");
  if (ps.empty()) throw std::invalid_argument("verify_lemma31: need at least one p");
  if (trials < 1) throw std::invalid_argument("verify_lemma31: trials must be >= 1");
  if (eta <= 0.0) throw std::invalid_argument("verify_lemma31: eta must be positive");

  const double wreach = 6.0 / model.length;  // spectrum support used by the shift window
  std::vector<Lemma31Report> reps(ps.size());
  const double bound = mode == LemmaMode::general ? 4.0 * spectrum_l1(model)
                                                  : 4.0 * eta * spectrum_linf(model);
  for (auto& rep : reps) rep.bound = bound;

  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng(seed, static_cast<std::uint64_t>(trial),
                  mode == LemmaMode::general ? 0x4c31u : 0x4c32u);
    GaussianMixture h;
    TripleNorm input;
    double ynorm = 1.0;
    if (mode == LemmaMode::general) {
      h = random_mixture(4, rng, 0.6, 0.8, 1.6);
      auto fh = [&](double u, double xi, double v, double zeta) {
        Eigen::VectorXd s(4);
        s << u, xi, v, zeta;
        return h.fourier(s);
      };
      input = scan_Xp(fh, kMixExtent, kMixExtent, 0.0);
    } else {
      GaussianMixture mu = random_mixture(2, rng, 0.6, 0.8, 1.6);
      GaussianMixture nu = random_mixture(2, rng, 0.6, 0.8, 1.6);
      h = tensor_mixture(mu, nu);
      double dummy = 0.0;
      scan_Y(mu, &input, &dummy);
      TripleNorm ypnu;
      scan_Y(nu, &ypnu, &ynorm);
    }

    const KEtaMixtureEvaluator fk(h, model, eta);
    const double vmax = kMixExtent + wreach / eta;
    const TripleNorm keta = scan_Xp(fk, vmax, 2.0 * kMixExtent, -1.0);

    for (size_t ip = 0; ip < ps.size(); ++ip) {
      Lemma31Report& rep = reps[ip];
      LemmaTrial tr;
      tr.p = ps[ip];
      tr.keta_norm = keta.get(ps[ip]);
      tr.input_norm = input.get(ps[ip]) * ynorm;
      tr.ratio = tr.input_norm > 0.0 ? tr.keta_norm / tr.input_norm : 0.0;
      tr.bound = rep.bound;
      tr.slack = tr.bound - tr.ratio;
      if (tr.slack < -1e-6 * rep.bound) ++rep.violations;
      rep.max_ratio = std::max(rep.max_ratio, tr.ratio);
      rep.max_keta_norm = std::max(rep.max_keta_norm, tr.keta_norm);
      rep.trials.push_back(tr);
    }
  }
  return reps;
}

Lemma31Report verify_lemma31(const CorrelationModel& model, double eta, double p, int trials,
                             LemmaMode mode, std::uint64_t seed) {
  return verify_lemma31_multi(model, eta, {p}, trials, mode, seed).front();
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& w) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need matching lists of >= 2 points");
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw std::invalid_argument("fit_loglog_slope: values must be positive");
    double wi = w.empty() ? 1.0 : w[i];
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sw += wi;
    sx += wi * lx;
    sy += wi * ly;
    sxx += wi * lx * lx;
    sxy += wi * lx * ly;
  }
  double denom = sxx - sx * sx / sw;
  if (denom <= 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
  return (sxy - sx * sy / sw) / denom;
}

}  // namespace wavekin
