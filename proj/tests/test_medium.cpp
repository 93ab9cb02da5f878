#include <doctest.h>

#include "wavekin/medium.hpp"

using namespace wavekin;

namespace {

CorrelationModel gaussian_model() {
  CorrelationModel m;
  m.kind = CorrelationModel::Kind::gaussian;
  m.length = 1.0;
  m.sigma2 = 1.0;
  m.dim = 1;
  return m;
}

}  // namespace

TEST_CASE("screen covariance matches the rescaled correlation") {
  CorrelationModel model = gaussian_model();
  const double eta = 1.0, dt = 0.1;
  ScreenGrid grid(1, 64, 16.0);
  Fft fft(1, 64);
  RngStream rng(7, 0, 1);

  std::vector<Eigen::ArrayXd> samples;
  for (int i = 0; i < 400; ++i) samples.push_back(sample_screen(model, grid, eta, dt, rng, fft));

  std::vector<Eigen::VectorXi> lags;
  for (int l : {0, 1, 2, 4, 8}) lags.push_back(Eigen::VectorXi::Constant(1, l));
  auto rows = empirical_covariance(samples, grid, lags);
  REQUIRE(rows.size() == lags.size());
  for (const auto& row : rows) {
    Eigen::VectorXd x(1);
    x[0] = row.lag[0] * grid.spacing() / eta;
    const double expected = correlation_eval(model, x) * dt;
    CHECK(std::abs(row.estimate - expected) <= 4.0 * row.stderr_ + 1e-12);
  }
}

TEST_CASE("screen covariance, exponential correlation") {
  CorrelationModel model = gaussian_model();
  model.kind = CorrelationModel::Kind::matern_like;
  const double eta = 0.5, dt = 0.2;
  ScreenGrid grid(1, 256, 16.0);  // dx = 1/16 <= eta l / 4
  Fft fft(1, 256);
  RngStream rng(11, 0, 1);

  std::vector<Eigen::ArrayXd> samples;
  for (int i = 0; i < 300; ++i) samples.push_back(sample_screen(model, grid, eta, dt, rng, fft));

  std::vector<Eigen::VectorXi> lags;
  for (int l : {0, 4, 8}) lags.push_back(Eigen::VectorXi::Constant(1, l));
  auto rows = empirical_covariance(samples, grid, lags);
  for (const auto& row : rows) {
    Eigen::VectorXd x(1);
    x[0] = row.lag[0] * grid.spacing() / eta;
    const double expected = correlation_eval(model, x) * dt;
    // The exponential correlation has a slow spectral tail; allow a small
    // periodization/truncation bias on top of the sampling error.
    CHECK(std::abs(row.estimate - expected) <= 4.0 * row.stderr_ + 0.02 * dt);
  }
}

TEST_CASE("screen mean is centered") {
  CorrelationModel model = gaussian_model();
  ScreenGrid grid(1, 64, 16.0);
  Fft fft(1, 64);
  RngStream rng(3, 0, 1);
  double acc = 0.0;
  const int n = 200;
  for (int i = 0; i < n; ++i) acc += sample_screen(model, grid, 1.0, 0.1, rng, fft).mean();
  CHECK(std::abs(acc / n) < 0.02);
}

TEST_CASE("under-resolved screen grid is rejected") {
  CorrelationModel model = gaussian_model();
  ScreenGrid grid(1, 16, 16.0);  // dx = 1 > eta l / 4
  Fft fft(1, 16);
  RngStream rng(1, 0, 1);
  CHECK_THROWS(sample_screen(model, grid, 1.0, 0.1, rng, fft));
}

TEST_CASE("zero-variance medium gives zero screens") {
  CorrelationModel model = gaussian_model();
  model.sigma2 = 0.0;
  ScreenGrid grid(1, 64, 16.0);
  Fft fft(1, 64);
  RngStream rng(5, 0, 1);
  Eigen::ArrayXd s = sample_screen(model, grid, 1.0, 0.1, rng, fft);
  CHECK(s.abs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("spectrum closed forms") {
  CorrelationModel model = gaussian_model();
  model.sigma2 = 2.0;
  model.length = 0.7;
  Eigen::VectorXd k(1);
  k[0] = 1.3;
  const double expect =
      2.0 * std::sqrt(kTwoPi * 0.49) * std::exp(-0.5 * 0.49 * 1.3 * 1.3);
  CHECK(spectrum_eval(model, k) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(spectrum_linf(model) == doctest::Approx(2.0 * std::sqrt(kTwoPi * 0.49)).epsilon(1e-12));
  // L1 of the spectrum is (2 pi)^d R(0).
  CHECK(spectrum_l1(model) == doctest::Approx(kTwoPi * 2.0).epsilon(1e-12));
}
