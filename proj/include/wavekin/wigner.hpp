#pragma once

#include <Eigen/Core>

#include "wavekin/fft.hpp"
#include "wavekin/schrodinger.hpp"

namespace wavekin {

// Discrete Wigner transform on the offset grid y_m = m * (2 dx / eta), so the
// half-shifts x -+ eta y/2 are exact grid lookups. The k-grid is the dual of
// the y-grid: dk = pi * eta / (n dx).
struct WignerGrid {
  ScreenGrid xgrid;
  double eta = 1.0;
  double t = 0.0;
  Eigen::ArrayXd values;  // flattened x-major, then k (each axis of length n)

  double dy() const { return 2.0 * xgrid.spacing() / eta; }
  double dk() const { return kTwoPi / (xgrid.n * dy()); }
  double kcoord(int idx) const {
    int m = idx < xgrid.n / 2 ? idx : idx - xgrid.n;
    return dk() * m;
  }
  double cell_volume() const { return std::pow(xgrid.spacing() * dk(), xgrid.dim); }
  long size() const { return xgrid.size() * xgrid.size(); }

  // Sum over k of W(x,k) dk^d; equals |psi(x)|^2 exactly.
  Eigen::ArrayXd k_marginal() const;
  double total_mass() const { return values.sum() * cell_volume(); }
};

WignerGrid wigner_transform(const WaveField& psi, const Fft& fft);

// Scaled phase-space test function
//   phi(x,k) = eta^{-d(s1+s2)} g((x - x1)/eta^{s1}; wx) g((k - k1)/eta^{s2}; wk)
// with g a unit-mass gaussian of width w per axis.
struct TestFunction {
  int dim = 1;
  double eta = 1.0;
  double s1 = 0.0;
  double s2 = 0.0;
  Eigen::VectorXd x1;  // spatial center
  Eigen::VectorXd k1;  // wavenumber center
  double wx = 1.0;
  double wk = 1.0;

  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& k) const;

  // Fourier transform over both variables, F phi(u, xi).
  Complex fourier(const Eigen::VectorXd& u, const Eigen::VectorXd& xi) const;

  // (2pi)^{-d} \int e^{i k.y} phi(x,k) dk, the kernel used for streaming
  // pairings against psi(x - eta y/2) conj(psi)(x + eta y/2).
  Complex phys_x_fourier_k(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  // Separable pieces of the same kernel (spatial factor and y factor).
  double spatial_factor(const Eigen::VectorXd& x) const;
  Complex offset_factor(const Eigen::VectorXd& y) const;

  double x_width() const { return wx * std::pow(eta, s1); }
  double k_width() const { return wk * std::pow(eta, s2); }
};

TestFunction make_test_function(int dim, double eta, double s1, double s2,
                                const Eigen::VectorXd& x1, const Eigen::VectorXd& k1,
                                double wx = 1.0, double wk = 1.0);

// Riemann-sum pairing sum W phi dx^d dk^d over the full Wigner grid.
// Rejects test functions not resolved by the grid (>= 4 cells per feature).
double pair_observable(const WignerGrid& w, const TestFunction& phi);

// Same pairing evaluated without forming the Wigner grid, by summing
// psi(x - eta y/2) conj(psi)(x + eta y/2) against the separable kernel with
// the y-range truncated where the kernel has decayed below ~1e-14.
double pair_field(const WaveField& psi, const TestFunction& phi);

}  // namespace wavekin
