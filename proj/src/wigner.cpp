#include "wavekin/wigner.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wavekin {

namespace {

// Correlation table F(x, m) = psi(x - m dx) conj(psi)(x + m dx) for one x,
// written into buf (length n^d), m indexed FFT-style with periodic wrap.
void fill_offset_row(const WaveField& psi, long xflat, std::complex<double>* buf) {
  const ScreenGrid& g = psi.grid;
  const int n = g.n;
  if (g.dim == 1) {
    const int i = static_cast<int>(xflat);
    for (int m = 0; m < n; ++m)
      buf[m] = psi.values[g.wrap(i - m)] * std::conj(psi.values[g.wrap(i + m)]);
  } else {
    const int i = static_cast<int>(xflat / n), j = static_cast<int>(xflat % n);
    for (int m0 = 0; m0 < n; ++m0)
      for (int m1 = 0; m1 < n; ++m1)
        buf[static_cast<long>(m0) * n + m1] =
            psi.values[g.flat(g.wrap(i - m0), g.wrap(j - m1))] *
            std::conj(psi.values[g.flat(g.wrap(i + m0), g.wrap(j + m1))]);
  }
}

void check_resolution(const ScreenGrid& xgrid, double dk, const TestFunction& phi) {
  if (phi.dim != xgrid.dim) throw std::invalid_argument("pairing: dimension mismatch");
  if (phi.x_width() < 4.0 * xgrid.spacing() * (1.0 - 1e-12))
    throw std::invalid_argument("pairing: test function x-width under-resolved (< 4 cells)");
  if (phi.k_width() < 4.0 * dk * (1.0 - 1e-12))
    throw std::invalid_argument("pairing: test function k-width under-resolved (< 4 cells)");
}

}  // namespace

Eigen::ArrayXd WignerGrid::k_marginal() const {
  const long nx = xgrid.size();
  Eigen::ArrayXd out(nx);
  const double dkd = std::pow(dk(), xgrid.dim);
  for (long i = 0; i < nx; ++i) out[i] = values.segment(i * nx, nx).sum() * dkd;
  return out;
}

WignerGrid wigner_transform(const WaveField& psi, const Fft& fft) {
  const ScreenGrid& g = psi.grid;
  if (fft.dim() != g.dim || fft.n() != g.n)
    throw std::invalid_argument("wigner_transform: fft/grid mismatch");
  const long nx = g.size();
  if (nx * nx > (1L << 26))
    throw std::invalid_argument("wigner_transform: full phase-space grid too large; use pair_field");

  WignerGrid w;
  w.xgrid = g;
  w.eta = psi.eta;
  w.t = psi.t;
  w.values.resize(nx * nx);

  // W(x, k_l) = (2pi)^{-d} dy^d sum_m e^{i k_l . y_m} F(x, m); with
  // k_l = l dk and y_m = m dy the phase is 2 pi l m / n, so the sum is the
  // inverse DFT times n^d, and the prefactors collapse to dk^{-d}.
  const double scale = std::pow(w.dk(), -g.dim);
  std::vector<std::complex<double>> buf(nx);
  double max_w = 0.0, max_imag = 0.0;
  for (long i = 0; i < nx; ++i) {
    fill_offset_row(psi, i, buf.data());
    fft.inverse(buf.data());
    for (long l = 0; l < nx; ++l) {
      double re = buf[l].real() * scale;
      w.values[i * nx + l] = re;
      max_w = std::max(max_w, std::abs(re));
      max_imag = std::max(max_imag, std::abs(buf[l].imag()) * scale);
    }
  }
  if (max_imag > 1e-12 * std::max(max_w, 1e-300))
    throw std::runtime_error("wigner_transform: non-real output (Hermitian symmetry violated)");
  return w;
}

double TestFunction::spatial_factor(const Eigen::VectorXd& x) const {
  const double w = x_width();
  const double norm = std::pow(kTwoPi * w * w, -0.5 * dim);
  return norm * std::exp(-(x - x1).squaredNorm() / (2.0 * w * w));
}

double TestFunction::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& k) const {
  const double w = k_width();
  const double norm = std::pow(kTwoPi * w * w, -0.5 * dim);
  return spatial_factor(x) * norm * std::exp(-(k - k1).squaredNorm() / (2.0 * w * w));
}

Complex TestFunction::fourier(const Eigen::VectorXd& u, const Eigen::VectorXd& xi) const {
  const double wx2 = x_width() * x_width(), wk2 = k_width() * k_width();
  double mag = std::exp(-0.5 * (wx2 * u.squaredNorm() + wk2 * xi.squaredNorm()));
  double phase = -(u.dot(x1) + xi.dot(k1));
  return mag * Complex(std::cos(phase), std::sin(phase));
}

Complex TestFunction::offset_factor(const Eigen::VectorXd& y) const {
  const double wk2 = k_width() * k_width();
  double mag = std::pow(kTwoPi, -dim) * std::exp(-0.5 * wk2 * y.squaredNorm());
  double phase = k1.dot(y);
  return mag * Complex(std::cos(phase), std::sin(phase));
}

Complex TestFunction::phys_x_fourier_k(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  return spatial_factor(x) * offset_factor(y);
}

TestFunction make_test_function(int dim, double eta, double s1, double s2,
                                const Eigen::VectorXd& x1, const Eigen::VectorXd& k1,
                                double wx, double wk) {
  if (s1 < 0.0 || s2 < 0.0) throw std::invalid_argument("make_test_function: s1, s2 must be >= 0");
  if (eta <= 0.0) throw std::invalid_argument("make_test_function: eta must be positive");
  if (x1.size() != dim || k1.size() != dim)
    throw std::invalid_argument("make_test_function: center dimension mismatch");
  if (wx <= 0.0 || wk <= 0.0) throw std::invalid_argument("make_test_function: widths must be positive");
  TestFunction phi;
  phi.dim = dim;
  phi.eta = eta;
  phi.s1 = s1;
  phi.s2 = s2;
  phi.x1 = x1;
  phi.k1 = k1;
  phi.wx = wx;
  phi.wk = wk;
  return phi;
}

double pair_observable(const WignerGrid& w, const TestFunction& phi) {
  check_resolution(w.xgrid, w.dk(), phi);
  const long nx = w.xgrid.size();
  const int n = w.xgrid.n, d = w.xgrid.dim;

  Eigen::ArrayXd sx(nx), sk(nx);
  const double wk = phi.k_width();
  const double knorm = std::pow(kTwoPi * wk * wk, -0.5 * d);
  for (long i = 0; i < nx; ++i) {
    sx[i] = phi.spatial_factor(w.xgrid.point(i));
    Eigen::VectorXd k(d);
    if (d == 1) {
      k[0] = w.kcoord(static_cast<int>(i));
    } else {
      k[0] = w.kcoord(static_cast<int>(i / n));
      k[1] = w.kcoord(static_cast<int>(i % n));
    }
    sk[i] = knorm * std::exp(-(k - phi.k1).squaredNorm() / (2.0 * wk * wk));
  }

  double total = 0.0;
  for (long i = 0; i < nx; ++i)
    total += sx[i] * (w.values.segment(i * nx, nx) * sk).sum();
  return total * std::pow(w.xgrid.spacing() * w.dk(), d);
}

double pair_field(const WaveField& psi, const TestFunction& phi) {
  const ScreenGrid& g = psi.grid;
  const double dy = 2.0 * g.spacing() / psi.eta;
  const double dk = kTwoPi / (g.n * dy);
  check_resolution(g, dk, phi);

  // Offsets beyond |y| ~ 8/k_width contribute below ~1e-14 of the kernel peak.
  const double ymax = 8.0 / phi.k_width();
  int mmax = std::min(g.n / 2 - 1, static_cast<int>(std::ceil(ymax / dy)));
  const int d = g.dim;

  // Per-axis offset kernels; the full kernel is their product times (2pi)^{-d}.
  std::vector<Complex> ky(2 * mmax + 1);
  for (int m = -mmax; m <= mmax; ++m) {
    double y = m * dy;
    double mag = std::exp(-0.5 * phi.k_width() * phi.k_width() * y * y);
    // phase handled per axis below via k1 components
    ky[m + mmax] = mag;
  }

  const long nx = g.size();
  Complex total = 0.0;
  for (long i = 0; i < nx; ++i) {
    double sx = phi.spatial_factor(g.point(i));
    if (sx < 1e-300) continue;
    Complex inner = 0.0;
    if (d == 1) {
      const int ii = static_cast<int>(i);
      for (int m = -mmax; m <= mmax; ++m) {
        double y = m * dy;
        double phase = phi.k1[0] * y;
        Complex kern = ky[m + mmax].real() * Complex(std::cos(phase), std::sin(phase));
        inner += kern * psi.values[g.wrap(ii - m)] * std::conj(psi.values[g.wrap(ii + m)]);
      }
    } else {
      const int i0 = static_cast<int>(i / g.n), i1 = static_cast<int>(i % g.n);
      for (int m0 = -mmax; m0 <= mmax; ++m0) {
        double y0 = m0 * dy;
        double ph0 = phi.k1[0] * y0;
        Complex k0 = ky[m0 + mmax].real() * Complex(std::cos(ph0), std::sin(ph0));
        for (int m1 = -mmax; m1 <= mmax; ++m1) {
          double y1 = m1 * dy;
          double ph1 = phi.k1[1] * y1;
          Complex kern = k0 * (ky[m1 + mmax].real() * Complex(std::cos(ph1), std::sin(ph1)));
          inner += kern * psi.values[g.flat(g.wrap(i0 - m0), g.wrap(i1 - m1))] *
                   std::conj(psi.values[g.flat(g.wrap(i0 + m0), g.wrap(i1 + m1))]);
        }
      }
    }
    total += sx * inner;
  }
  total *= std::pow(kTwoPi, -d) * std::pow(g.spacing(), d) * std::pow(dy, d);
  return total.real();
}

}  // namespace wavekin
