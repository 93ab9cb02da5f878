#include "wavekin/medium.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace wavekin {

Eigen::ArrayXd sample_screen(const CorrelationModel& model, const ScreenGrid& grid, double eta,
                             double dt, RngStream& rng, const Fft& fft) {
  model.validate();
  if (dt <= 0) throw std::invalid_argument("sample_screen: dt must be positive");
  if (eta <= 0) throw std::invalid_argument("sample_screen: eta must be positive");
  if (grid.spacing() > eta * model.length / 4.0 * (1.0 + 1e-12))
    throw std::invalid_argument("sample_screen: grid does not resolve the medium scale (dx > eta*l/4)");
  if (fft.dim() != grid.dim || fft.n() != grid.n)
    throw std::invalid_argument("sample_screen: fft/grid mismatch");

  const long sz = grid.size();
  Eigen::ArrayXd out(sz);
  if (model.sigma2 == 0.0) {
    out.setZero();
    return out;
  }

  std::vector<std::complex<double>> buf(sz);
  for (long i = 0; i < sz; ++i) buf[i] = rng.gaussian();
  fft.forward(buf.data());

  // Filter so that Cov(f_i, f_j) = dt / L^d * sum_k eta^d Rhat(eta k) e^{ik.(x_i-x_j)},
  // the box periodization of R(./eta) dt.
  const double etad = std::pow(eta, grid.dim);
  const double ld = std::pow(grid.extent, grid.dim);
  const double nd = static_cast<double>(sz);
  for (long i = 0; i < sz; ++i) {
    double k2 = grid.freq_sq(i);
    double spec = etad * spectrum_eval_r2(model, eta * eta * k2);
    buf[i] *= std::sqrt(nd * dt * spec / ld);
  }
  fft.inverse(buf.data());

  double max_mag = 0.0, max_imag = 0.0;
  for (long i = 0; i < sz; ++i) {
    out[i] = buf[i].real();
    max_mag = std::max(max_mag, std::abs(out[i]));
    max_imag = std::max(max_imag, std::abs(buf[i].imag()));
  }
  if (max_imag > 1e-12 * std::max(max_mag, 1e-300))
    throw std::runtime_error("sample_screen: Hermitian symmetry violated");
  return out;
}

std::vector<CovarianceRow> empirical_covariance(const std::vector<Eigen::ArrayXd>& samples,
                                                const ScreenGrid& grid,
                                                const std::vector<Eigen::VectorXi>& lags) {
  const long n_samples = static_cast<long>(samples.size());
  if (n_samples < 2) throw std::invalid_argument("empirical_covariance: need at least 2 samples");
  const long sz = grid.size();
  Eigen::ArrayXd mean = Eigen::ArrayXd::Zero(sz);
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(n_samples);

  std::vector<CovarianceRow> rows;
  rows.reserve(lags.size());
  for (const auto& lag : lags) {
    // shifted flat index with periodic wrap
    auto shifted = [&](long idx) -> long {
      if (grid.dim == 1) return grid.wrap(static_cast<int>(idx) + lag[0]);
      int i = static_cast<int>(idx / grid.n), j = static_cast<int>(idx % grid.n);
      return grid.flat(grid.wrap(i + lag[0]), grid.wrap(j + lag[1]));
    };
    double sum = 0.0, sumsq = 0.0;
    for (long s = 0; s < n_samples; ++s) {
      double u = 0.0;
      const auto& f = samples[s];
      for (long i = 0; i < sz; ++i) u += (f[i] - mean[i]) * (f[shifted(i)] - mean[shifted(i)]);
      u /= static_cast<double>(sz);
      sum += u;
      sumsq += u * u;
    }
    const double nn = static_cast<double>(n_samples);
    CovarianceRow row;
    row.lag = lag;
    row.estimate = sum / (nn - 1.0);
    double var_u = (sumsq - sum * sum / nn) / (nn - 1.0);
    row.stderr_ = nn / (nn - 1.0) * std::sqrt(std::max(var_u, 0.0) / nn);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wavekin
