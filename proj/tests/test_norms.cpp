#include <doctest.h>

#include <cmath>

#include "wavekin/grid.hpp"
#include "wavekin/norms.hpp"

using namespace wavekin;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

CorrelationModel gaussian_model() {
  CorrelationModel m;
  m.kind = CorrelationModel::Kind::gaussian;
  m.length = 1.0;
  m.sigma2 = 1.0;
  m.dim = 1;
  return m;
}

// F g(u, xi) = 2 pi e^{-(u^2 + xi^2)/2} sampled on a centered grid.
FourierGridFn gaussian_two_factor(int n, double step) {
  std::vector<AxisSpec> axes = {centered_axis(n, step), centered_axis(n, step)};
  return sample_fourier(axes, [](const Eigen::VectorXd& s) {
    return std::complex<double>(kTwoPi * std::exp(-0.5 * s.squaredNorm()), 0.0);
  });
}

}  // namespace

TEST_CASE("Y norms of a gaussian match the closed forms") {
  // Y_inf = sup = 2 pi; Y_1 = 2 pi sqrt(2 pi); Y = 2 pi sqrt(2 pi);
  // Y_2 = 2 pi (int e^{-u^2} du)^{1/2} = 2 pi pi^{1/4}.
  FourierGridFn g = gaussian_two_factor(129, 0.125);
  CHECK(norm_Yp(g, kInf) == doctest::Approx(kTwoPi).epsilon(1e-10));
  CHECK(norm_Yp(g, 1.0) == doctest::Approx(kTwoPi * std::sqrt(kTwoPi)).epsilon(1e-6));
  CHECK(norm_Y(g) == doctest::Approx(kTwoPi * std::sqrt(kTwoPi)).epsilon(1e-6));
  CHECK(norm_Yp(g, 2.0) == doctest::Approx(kTwoPi * std::pow(kPi, 0.25)).epsilon(1e-6));
}

TEST_CASE("Y norms converge under refinement") {
  FourierGridFn coarse = gaussian_two_factor(129, 0.125);
  FourierGridFn fine = gaussian_two_factor(257, 0.0625);
  CHECK(std::abs(norm_Yp(fine, 1.0) - norm_Yp(coarse, 1.0)) /
            norm_Yp(fine, 1.0) < 1e-6);
  CHECK(std::abs(norm_Y(fine) - norm_Y(coarse)) / norm_Y(fine) < 1e-6);
}

TEST_CASE("X_p norm of a four-axis gaussian") {
  // F h = e^{-|s|^2/2}: X_p^p = sup_{v,zeta} int sup_xi |F h|^p du
  //                          = int e^{-p u^2 / 2} du = sqrt(2 pi / p).
  std::vector<AxisSpec> axes(4, centered_axis(49, 0.25));
  FourierGridFn h = sample_fourier(axes, [](const Eigen::VectorXd& s) {
    return std::complex<double>(std::exp(-0.5 * s.squaredNorm()), 0.0);
  });
  CHECK(norm_Xp(h, 1.0) == doctest::Approx(std::sqrt(kTwoPi)).epsilon(1e-6));
  CHECK(norm_Xp(h, 2.0) == doctest::Approx(std::sqrt(std::sqrt(kPi))).epsilon(1e-6));
  CHECK(norm_Xp(h, kInf) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("norms reject grids without boundary decay") {
  std::vector<AxisSpec> axes = {centered_axis(17, 0.25), centered_axis(17, 0.25)};
  FourierGridFn g = sample_fourier(axes, [](const Eigen::VectorXd& s) {
    return std::complex<double>(std::exp(-0.01 * s.squaredNorm()), 0.0);
  });
  CHECK_THROWS(norm_Yp(g, 1.0));
}

TEST_CASE("Fourier transport and collision identities hold to roundoff") {
  IdentityReport rep = fourier_identities_check(gaussian_model(), 0.5);
  CHECK(rep.transport_mismatch < 1e-12);
  CHECK(rep.collision_mismatch < 1e-12);
  CHECK(rep.doubled_transport_mismatch < 1e-12);
  CHECK(rep.doubled_collision_mismatch < 1e-12);
}

TEST_CASE("off-grid shear displacement is rejected") {
  CHECK_THROWS(fourier_identities_check(gaussian_model(), 0.37));
}

TEST_CASE("operator bound holds on random mixtures") {
  CorrelationModel model = gaussian_model();
  for (double p : {1.0, 2.0, kInf}) {
    Lemma31Report rep = verify_lemma31(model, 0.5, p, 5, LemmaMode::general, 12345);
    CHECK(rep.violations == 0);
    CHECK(rep.max_ratio > 0.0);
    CHECK(rep.max_ratio <= rep.bound * (1.0 + 1e-6));
  }
}

TEST_CASE("tensor-mode operator bound and eta smallness") {
  CorrelationModel model = gaussian_model();
  Lemma31Report half = verify_lemma31(model, 0.5, 2.0, 5, LemmaMode::tensor, 7);
  Lemma31Report quarter = verify_lemma31(model, 0.25, 2.0, 5, LemmaMode::tensor, 7);
  CHECK(half.violations == 0);
  CHECK(quarter.violations == 0);
  // The operator norm on tensor inputs shrinks roughly linearly in eta.
  CHECK(quarter.max_keta_norm < 0.7 * half.max_keta_norm);
}

TEST_CASE("weighted log-log slope fit is exact on a power law") {
  std::vector<double> x = {0.5, 0.25, 0.125, 0.0625};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v);
  CHECK(fit_loglog_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
  std::vector<double> w = {1.0, 4.0, 2.0, 8.0};
  CHECK(fit_loglog_slope(x, y, w) == doctest::Approx(2.0).epsilon(1e-12));
  y[1] = -1.0;
  CHECK_THROWS(fit_loglog_slope(x, y));
}
