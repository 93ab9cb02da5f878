#pragma once

#include <Eigen/Core>
#include <vector>

#include "wavekin/correlation.hpp"
#include "wavekin/fft.hpp"
#include "wavekin/grid.hpp"
#include "wavekin/rng.hpp"

namespace wavekin {

// One Wiener increment of the medium, sampled on the grid by spectral
// synthesis: real white noise filtered by sqrt of the eta-rescaled spectrum.
// Cov(dB(x_i), dB(x_j)) = R((x_i - x_j)/eta) * dt up to periodization of the box.
// Requires grid.spacing() <= eta * l / 4 (at least four samples per medium
// correlation length).
Eigen::ArrayXd sample_screen(const CorrelationModel& model, const ScreenGrid& grid, double eta,
                             double dt, RngStream& rng, const Fft& fft);

struct CovarianceRow {
  Eigen::VectorXi lag;  // grid offset in cells
  double estimate = 0.0;
  double stderr_ = 0.0;
};

// Unbiased (divisor N-1) per-lag covariance across samples, averaged over grid
// positions with periodic wrap. Standard error from the spread of per-sample
// averaged products.
std::vector<CovarianceRow> empirical_covariance(const std::vector<Eigen::ArrayXd>& samples,
                                                const ScreenGrid& grid,
                                                const std::vector<Eigen::VectorXi>& lags);

}  // namespace wavekin
