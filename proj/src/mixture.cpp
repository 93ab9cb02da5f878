#include "wavekin/mixture.hpp"

#include <cmath>
#include <stdexcept>

#include "wavekin/grid.hpp"

namespace wavekin {

std::complex<double> SeparableGaussian::eval(const Eigen::VectorXd& z) const {
  double e = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    double d = (z[i] - center[i]) / width[i];
    e += d * d;
  }
  return amplitude * std::exp(-0.5 * e);
}

std::complex<double> SeparableGaussian::fourier(const Eigen::VectorXd& s) const {
  double mag = 1.0, phase = 0.0;
  for (int i = 0; i < s.size(); ++i) {
    mag *= width[i] * std::sqrt(2.0 * kPi);
    mag *= std::exp(-0.5 * width[i] * width[i] * s[i] * s[i]);
    phase -= s[i] * center[i];
  }
  return amplitude * mag * std::complex<double>(std::cos(phase), std::sin(phase));
}

std::complex<double> GaussianMixture::eval(const Eigen::VectorXd& z) const {
  std::complex<double> v = 0.0;
  for (const auto& p : parts) v += p.eval(z);
  return v;
}

std::complex<double> GaussianMixture::fourier(const Eigen::VectorXd& s) const {
  std::complex<double> v = 0.0;
  for (const auto& p : parts) v += p.fourier(s);
  return v;
}

GaussianMixture random_mixture(int n_axes, RngStream& rng, double center_range,
                               double width_min, double width_max) {
  if (n_axes < 1) throw std::invalid_argument("random_mixture: n_axes must be >= 1");
  GaussianMixture m;
  m.n_axes = n_axes;
  int n_parts = 3 + static_cast<int>(rng.next_u64() % 4);  // 3..6
  for (int p = 0; p < n_parts; ++p) {
    SeparableGaussian g;
    g.center.resize(n_axes);
    g.width.resize(n_axes);
    for (int i = 0; i < n_axes; ++i) {
      g.center[i] = center_range * (2.0 * rng.uniform() - 1.0);
      g.width[i] = width_min + (width_max - width_min) * rng.uniform();
    }
    g.amplitude = 2.0 * rng.uniform() - 1.0;
    m.parts.push_back(g);
  }
  return m;
}

GaussianMixture tensor_mixture(const GaussianMixture& a, const GaussianMixture& b) {
  GaussianMixture m;
  m.n_axes = a.n_axes + b.n_axes;
  for (const auto& pa : a.parts)
    for (const auto& pb : b.parts) {
      SeparableGaussian g;
      g.center.resize(m.n_axes);
      g.width.resize(m.n_axes);
      g.center << pa.center, pb.center;
      g.width << pa.width, pb.width;
      g.amplitude = pa.amplitude * pb.amplitude;
      m.parts.push_back(g);
    }
  return m;
}

}  // namespace wavekin
