#pragma once

#include <Eigen/Core>

namespace wavekin {

// Medium statistics: a stationary correlation R(x) with non-negative
// spectrum Rhat(k), both in closed form.
//
// Fourier convention throughout the project:
//   Fhat(k) = \int e^{-i k.x} f(x) dx,   f(x) = (2pi)^{-d} \int e^{i k.x} Fhat(k) dk.
//
// gaussian:    R(x) = sigma2 exp(-|x|^2 / (2 l^2)),
//              Rhat(k) = sigma2 (2 pi l^2)^{d/2} exp(-l^2 |k|^2 / 2).
// matern_like: R(x) = sigma2 exp(-|x| / l)  (Matern with smoothness 1/2),
//              Rhat(k) = sigma2 * c_d l^d / (1 + l^2 |k|^2)^{(d+1)/2},
//              c_1 = 2, c_2 = 2 pi.
struct CorrelationModel {
  enum class Kind { gaussian, matern_like };

  Kind kind = Kind::gaussian;
  double length = 1.0;   // correlation length l
  double sigma2 = 1.0;   // amplitude R(0)
  int dim = 1;

  void validate() const;
  double r0() const { return sigma2; }
};

double correlation_eval(const CorrelationModel& model, const Eigen::VectorXd& x);
double spectrum_eval(const CorrelationModel& model, const Eigen::VectorXd& k);

// Radial forms used by samplers and quadratures.
double correlation_eval_r2(const CorrelationModel& model, double r2);
double spectrum_eval_r2(const CorrelationModel& model, double k2);

// Closed-form L1 and Linf norms of Rhat (used in the operator bounds).
double spectrum_l1(const CorrelationModel& model);
double spectrum_linf(const CorrelationModel& model);

}  // namespace wavekin
