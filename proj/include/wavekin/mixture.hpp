#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "wavekin/rng.hpp"

namespace wavekin {

// Separable (axis-aligned) gaussian bump on R^m with a complex amplitude:
//   g(z) = amp * prod_i exp(-(z_i - c_i)^2 / (2 w_i^2)).
// Closed under the Fourier transform Fg(s) = int e^{-i s.z} g(z) dz:
//   Fg(s) = amp * prod_i w_i sqrt(2 pi) exp(-w_i^2 s_i^2 / 2) * e^{-i s.c}.
struct SeparableGaussian {
  Eigen::VectorXd center;
  Eigen::VectorXd width;  // per-axis standard deviations, all > 0
  std::complex<double> amplitude{1.0, 0.0};

  std::complex<double> eval(const Eigen::VectorXd& z) const;
  std::complex<double> fourier(const Eigen::VectorXd& s) const;
};

// Finite sum of separable gaussians; the random smooth test family used by
// the norm and operator-bound checkers.
struct GaussianMixture {
  int n_axes = 0;
  std::vector<SeparableGaussian> parts;

  std::complex<double> eval(const Eigen::VectorXd& z) const;
  std::complex<double> fourier(const Eigen::VectorXd& s) const;
};

// Seeded random mixture with 3-6 components, centers in [-c, c] per axis and
// widths in [wmin, wmax].
GaussianMixture random_mixture(int n_axes, RngStream& rng, double center_range = 1.0,
                               double width_min = 0.5, double width_max = 1.5);

// Tensor product of two mixtures over disjoint axis blocks: h(z1, z2) = g1(z1) g2(z2).
GaussianMixture tensor_mixture(const GaussianMixture& a, const GaussianMixture& b);

}  // namespace wavekin
