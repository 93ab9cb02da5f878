#include "wavekin/correlation.hpp"

#include <cmath>
#include <stdexcept>

#include "wavekin/grid.hpp"

namespace wavekin {

void CorrelationModel::validate() const {
  if (dim < 1) throw std::invalid_argument("CorrelationModel: dim must be >= 1");
  if (length <= 0) throw std::invalid_argument("CorrelationModel: length must be positive");
  if (sigma2 < 0) throw std::invalid_argument("CorrelationModel: sigma2 must be non-negative");
  if (kind == Kind::matern_like && dim > 2)
    throw std::invalid_argument("CorrelationModel: matern_like implemented for dim <= 2");
}

double correlation_eval_r2(const CorrelationModel& m, double r2) {
  switch (m.kind) {
    case CorrelationModel::Kind::gaussian:
      return m.sigma2 * std::exp(-0.5 * r2 / (m.length * m.length));
    case CorrelationModel::Kind::matern_like:
      return m.sigma2 * std::exp(-std::sqrt(r2) / m.length);
  }
  return 0.0;
}

double spectrum_eval_r2(const CorrelationModel& m, double k2) {
  const double l = m.length;
  switch (m.kind) {
    case CorrelationModel::Kind::gaussian:
      return m.sigma2 * std::pow(kTwoPi * l * l, 0.5 * m.dim) * std::exp(-0.5 * l * l * k2);
    case CorrelationModel::Kind::matern_like: {
      double den = std::pow(1.0 + l * l * k2, 0.5 * (m.dim + 1));
      double c = m.dim == 1 ? 2.0 : kTwoPi;
      return m.sigma2 * c * std::pow(l, m.dim) / den;
    }
  }
  return 0.0;
}

double correlation_eval(const CorrelationModel& m, const Eigen::VectorXd& x) {
  return correlation_eval_r2(m, x.squaredNorm());
}

double spectrum_eval(const CorrelationModel& m, const Eigen::VectorXd& k) {
  return spectrum_eval_r2(m, k.squaredNorm());
}

double spectrum_l1(const CorrelationModel& m) {
  // \int Rhat dk = (2pi)^d R(0) by Fourier inversion, for any admissible model.
  return std::pow(kTwoPi, m.dim) * m.sigma2;
}

double spectrum_linf(const CorrelationModel& m) { return spectrum_eval_r2(m, 0.0); }

}  // namespace wavekin
