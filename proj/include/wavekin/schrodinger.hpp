#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>

#include "wavekin/correlation.hpp"
#include "wavekin/fft.hpp"
#include "wavekin/grid.hpp"
#include "wavekin/medium.hpp"
#include "wavekin/rng.hpp"

namespace wavekin {

using Complex = std::complex<double>;

struct WaveField {
  ScreenGrid grid;
  double eta = 1.0;
  double t = 0.0;
  Eigen::ArrayXcd values;

  double squared_norm() const { return values.abs2().sum() * grid.cell_volume(); }
};

// Initial wavefields: a modulated plane wave psi = eta^{-d a/2} chi(x/eta^a) e^{i k0.x/eta},
// an isotropic Bessel radiator (d >= 2), or the plane form with a gaussian
// envelope (plumbing for analytic tests).
struct SourceSpec {
  enum class Kind { plane, bessel, gaussian_envelope };

  Kind kind = Kind::plane;
  double alpha = 0.0;             // concentration exponent in [0,1]
  Eigen::VectorXd k0;             // carrier wavevector
  double envelope_width = 1.0;    // support half-width (raised cosine) or std dev (gaussian)
};

// Smooth compactly supported raised-cosine bump, separable per axis:
// chi(z) = prod_i cos^2(pi z_i / (2 w)) for |z_i| < w.
double raised_cosine(const Eigen::VectorXd& z, double width);

WaveField make_source(const SourceSpec& spec, const ScreenGrid& grid, double eta);

// Exact solve of the dispersive half-flow: Fourier mode k picks up
// exp(-i eta |k|^2 dt / 2).
void free_step(WaveField& psi, double dt, const Fft& fft);

// Exact pathwise solve of the multiplicative part: psi <- psi * exp(i dB(x)).
// The Ito drift -R0 psi dt/2 is exactly the Ito correction of this exponential.
void medium_step(WaveField& psi, const Eigen::ArrayXd& screen);

using SnapshotCallback = std::function<void(const WaveField&, int step)>;

// Strang composition free(dt/2) . medium . free(dt/2) over n_steps steps with
// independent screens. Deterministic given the stream.
WaveField propagate(const WaveField& psi0, const CorrelationModel& model, double T, int n_steps,
                    RngStream& rng, const Fft& fft, const SnapshotCallback& snapshot = nullptr);

// Free propagation by the exact dispersive multiplier (reference path).
WaveField propagate_free(const WaveField& psi0, double T, const Fft& fft);

// Default step count from the phase-rotation rule: eta k_occ^2 dt <= 0.5 with
// k_occ the largest occupied field wavenumber (|k0| + bandwidth)/eta.
int default_steps(const SourceSpec& spec, double eta, double T);

}  // namespace wavekin
