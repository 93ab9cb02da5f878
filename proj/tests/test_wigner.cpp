#include <doctest.h>

#include "wavekin/wigner.hpp"

using namespace wavekin;

namespace {

WaveField gaussian_field(const ScreenGrid& grid, double eta, double sigma, double k0) {
  WaveField psi;
  psi.grid = grid;
  psi.eta = eta;
  psi.values.resize(grid.size());
  for (long i = 0; i < grid.size(); ++i) {
    const double x = grid.coord(static_cast<int>(i));
    const double phase = k0 * x / eta;
    psi.values[i] = std::exp(-x * x / (2.0 * sigma * sigma)) *
                    Complex(std::cos(phase), std::sin(phase));
  }
  return psi;
}

}  // namespace

TEST_CASE("Wigner transform of a gaussian packet matches the closed form") {
  const double eta = 0.5, sigma = 1.0, k0 = 1.0;
  ScreenGrid grid(1, 256, 16.0);
  Fft fft(1, 256);
  WaveField psi = gaussian_field(grid, eta, sigma, k0);
  WignerGrid w = wigner_transform(psi, fft);

  // W(x,k) = (sigma / (eta sqrt(pi))) e^{-x^2/sigma^2} e^{-sigma^2 (k-k0)^2/eta^2}.
  // Near the box edge the periodic wrap produces a ghost term of size
  // ~exp(-(|x| - L)^2 / sigma^2), so compare on the inner half only.
  const double pref = sigma / (eta * std::sqrt(kPi));
  double max_err = 0.0, peak = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.coord(i);
    if (std::abs(x) > 4.0) continue;
    for (int l = 0; l < grid.n; ++l) {
      const double k = w.kcoord(l);
      const double expect = pref * std::exp(-x * x / (sigma * sigma)) *
                            std::exp(-sigma * sigma * (k - k0) * (k - k0) / (eta * eta));
      const double got = w.values[static_cast<long>(i) * grid.n + l];
      max_err = std::max(max_err, std::abs(got - expect));
      peak = std::max(peak, std::abs(expect));
    }
  }
  CHECK(max_err / peak < 5e-6);
}

TEST_CASE("k-marginal of the Wigner transform is the intensity, exactly") {
  const double eta = 0.5;
  ScreenGrid grid(1, 64, 8.0);
  Fft fft(1, 64);
  WaveField psi = gaussian_field(grid, eta, 0.8, 1.0);
  WignerGrid w = wigner_transform(psi, fft);
  Eigen::ArrayXd marg = w.k_marginal();
  for (long i = 0; i < grid.size(); ++i)
    CHECK(marg[i] == doctest::Approx(std::norm(psi.values[i])).epsilon(1e-12));
  CHECK(w.total_mass() == doctest::Approx(psi.squared_norm()).epsilon(1e-12));
}

TEST_CASE("grid pairing and streaming pairing agree") {
  const double eta = 0.5;
  ScreenGrid grid(1, 128, 8.0);
  Fft fft(1, 128);
  WaveField psi = gaussian_field(grid, eta, 1.0, 1.0);
  WignerGrid w = wigner_transform(psi, fft);
  TestFunction phi = make_test_function(1, eta, 0.0, 0.0, Eigen::VectorXd::Constant(1, 0.3),
                                        Eigen::VectorXd::Constant(1, 1.2));
  const double a = pair_observable(w, phi);
  const double b = pair_field(psi, phi);
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
}

TEST_CASE("pairing matches direct quadrature of the closed-form Wigner function") {
  const double eta = 0.5, sigma = 1.0, k0 = 1.0;
  ScreenGrid grid(1, 128, 8.0);
  WaveField psi = gaussian_field(grid, eta, sigma, k0);
  TestFunction phi = make_test_function(1, eta, 0.0, 0.0, Eigen::VectorXd::Constant(1, 0.5),
                                        Eigen::VectorXd::Constant(1, 0.8));
  const double got = pair_field(psi, phi);

  const double pref = sigma / (eta * std::sqrt(kPi));
  double expect = 0.0;
  const int nq = 400;
  const double xmax = 5.0, kmax = k0 + 5.0, kmin = k0 - 5.0;
  const double dx = 2.0 * xmax / nq, dk = (kmax - kmin) / nq;
  Eigen::VectorXd xv(1), kv(1);
  for (int i = 0; i < nq; ++i) {
    xv[0] = -xmax + (i + 0.5) * dx;
    for (int j = 0; j < nq; ++j) {
      kv[0] = kmin + (j + 0.5) * dk;
      const double wval = pref * std::exp(-xv[0] * xv[0] / (sigma * sigma)) *
                          std::exp(-sigma * sigma * (kv[0] - k0) * (kv[0] - k0) / (eta * eta));
      expect += wval * phi(xv, kv);
    }
  }
  expect *= dx * dk;
  CHECK(got == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("scaled test function widths follow the eta powers") {
  TestFunction phi = make_test_function(1, 0.25, 0.5, 1.0, Eigen::VectorXd::Zero(1),
                                        Eigen::VectorXd::Zero(1), 2.0, 3.0);
  CHECK(phi.x_width() == doctest::Approx(2.0 * 0.5).epsilon(1e-14));
  CHECK(phi.k_width() == doctest::Approx(3.0 * 0.25).epsilon(1e-14));
  // Unit mass in both variables regardless of scaling.
  double mass = 0.0;
  Eigen::VectorXd xv(1), kv(1);
  const int nq = 600;
  const double lim = 6.0;
  for (int i = 0; i < nq; ++i) {
    xv[0] = -lim + (i + 0.5) * 2.0 * lim / nq;
    for (int j = 0; j < nq; ++j) {
      kv[0] = -lim + (j + 0.5) * 2.0 * lim / nq;
      mass += phi(xv, kv);
    }
  }
  mass *= (2.0 * lim / nq) * (2.0 * lim / nq);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("under-resolved test functions are rejected") {
  const double eta = 0.5;
  ScreenGrid grid(1, 64, 8.0);
  WaveField psi = gaussian_field(grid, eta, 1.0, 0.0);
  TestFunction narrow = make_test_function(1, eta, 0.0, 0.0, Eigen::VectorXd::Zero(1),
                                           Eigen::VectorXd::Zero(1), 1.0, 0.05);
  CHECK_THROWS(pair_field(psi, narrow));
}
