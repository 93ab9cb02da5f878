#include "wavekin/schrodinger.hpp"

#include <cmath>
#include <stdexcept>

namespace wavekin {

double raised_cosine(const Eigen::VectorXd& z, double width) {
  double v = 1.0;
  for (int i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) >= width) return 0.0;
    double c = std::cos(kPi * z[i] / (2.0 * width));
    v *= c * c;
  }
  return v;
}

WaveField make_source(const SourceSpec& spec, const ScreenGrid& grid, double eta) {
  if (spec.k0.size() != grid.dim) throw std::invalid_argument("make_source: k0 dimension mismatch");
  if (spec.alpha < 0.0 || spec.alpha > 1.0) throw std::invalid_argument("make_source: alpha must be in [0,1]");
  const double k0n = spec.k0.norm();
  if (grid.spacing() > eta / (4.0 * k0n + 4.0) * (1.0 + 1e-12))
    throw std::invalid_argument("make_source: grid does not resolve the oscillation (dx > eta/(4|k0|+4))");
  if (spec.kind == SourceSpec::Kind::bessel && grid.dim < 2)
    throw std::invalid_argument("make_source: bessel source needs d >= 2");

  WaveField psi;
  psi.grid = grid;
  psi.eta = eta;
  psi.t = 0.0;
  psi.values.resize(grid.size());

  const double ea = std::pow(eta, spec.alpha);
  const double w = spec.envelope_width;
  double norm_pow;
  if (spec.kind == SourceSpec::Kind::bessel)
    norm_pow = std::pow(eta, -0.5 * ((grid.dim - 1) * spec.alpha + 1.0));
  else
    norm_pow = std::pow(eta, -0.5 * grid.dim * spec.alpha);

  for (long i = 0; i < grid.size(); ++i) {
    Eigen::VectorXd x = grid.point(i);
    Eigen::VectorXd z = x / ea;
    double env;
    if (spec.kind == SourceSpec::Kind::gaussian_envelope)
      env = std::exp(-z.squaredNorm() / (2.0 * w * w));
    else
      env = raised_cosine(z, w);
    if (spec.kind == SourceSpec::Kind::bessel) {
      double radial = std::cyl_bessel_j(0.0, k0n * x.norm() / eta);
      psi.values[i] = norm_pow * env * radial;
    } else {
      double phase = spec.k0.dot(x) / eta;
      psi.values[i] = norm_pow * env * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return psi;
}

void free_step(WaveField& psi, double dt, const Fft& fft) {
  if (fft.dim() != psi.grid.dim || fft.n() != psi.grid.n)
    throw std::invalid_argument("free_step: fft/grid mismatch");
  fft.forward(psi.values.data());
  const double c = 0.5 * psi.eta * dt;
  for (long i = 0; i < psi.grid.size(); ++i) {
    double phase = -c * psi.grid.freq_sq(i);
    psi.values[i] *= Complex(std::cos(phase), std::sin(phase));
  }
  fft.inverse(psi.values.data());
  psi.t += dt;
}

void medium_step(WaveField& psi, const Eigen::ArrayXd& screen) {
  if (screen.size() != psi.values.size()) throw std::invalid_argument("medium_step: grid mismatch");
  for (long i = 0; i < psi.values.size(); ++i)
    psi.values[i] *= Complex(std::cos(screen[i]), std::sin(screen[i]));
}

WaveField propagate(const WaveField& psi0, const CorrelationModel& model, double T, int n_steps,
                    RngStream& rng, const Fft& fft, const SnapshotCallback& snapshot) {
  if (n_steps < 1) throw std::invalid_argument("propagate: n_steps must be >= 1");
  const double dt = T / n_steps;
  WaveField psi = psi0;
  // Strang composition with adjacent dispersive half-steps merged.
  free_step(psi, 0.5 * dt, fft);
  psi.t = psi0.t;
  for (int s = 0; s < n_steps; ++s) {
    Eigen::ArrayXd screen = sample_screen(model, psi.grid, psi.eta, dt, rng, fft);
    medium_step(psi, screen);
    free_step(psi, s + 1 == n_steps ? 0.5 * dt : dt, fft);
    psi.t = psi0.t + (s + 1) * dt;
    if (snapshot) snapshot(psi, s + 1);
  }
  return psi;
}

WaveField propagate_free(const WaveField& psi0, double T, const Fft& fft) {
  WaveField psi = psi0;
  free_step(psi, T, fft);
  psi.t = psi0.t + T;
  return psi;
}

int default_steps(const SourceSpec& spec, double eta, double T) {
  double bandwidth = 4.0 / std::max(spec.envelope_width, 1e-12);
  double k_occ = (spec.k0.norm() + bandwidth) / eta;
  double dt_max = 0.5 / (eta * k_occ * k_occ);
  return std::max(1, static_cast<int>(std::ceil(T / dt_max)));
}

}  // namespace wavekin
