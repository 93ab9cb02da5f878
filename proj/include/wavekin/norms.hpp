#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "wavekin/correlation.hpp"
#include "wavekin/mixture.hpp"

namespace wavekin {

struct AxisSpec {
  int n = 0;
  double min = 0.0;
  double step = 0.0;
  double coord(int i) const { return min + i * step; }
};

// Uniformly centered axis: n points with spacing `step`, symmetric about 0.
AxisSpec centered_axis(int n, double step);

// Complex samples of a full Fourier transform F h on a uniform multi-axis
// grid, row-major. Two-factor functions use axes (u..., xi...); four-factor
// use (u..., xi..., v..., zeta...).
struct FourierGridFn {
  std::vector<AxisSpec> axes;
  Eigen::ArrayXcd values;

  long size() const;
  long stride(int axis) const;
  // Largest boundary-cell magnitude over the peak magnitude; norms are
  // unreliable when this exceeds 1e-6 (insufficient decay inside the grid).
  double decay_ratio() const;
};

FourierGridFn sample_fourier(const std::vector<AxisSpec>& axes,
                             const std::function<std::complex<double>(const Eigen::VectorXd&)>& f);

// Discrete functional norms: integrals as Riemann sums, suprema as grid
// maxima. p is 1, 2 or infinity.
//   ||g||_Yp^p  = int du sup_xi |F g(u, xi)|^p      (2d axes)
//   ||g||_Y     = sup_xi int du |F g(u, xi)|        (2d axes)
//   ||h||_Xp^p  = sup_{v,zeta} int du sup_xi |F h(u,xi,v,zeta)|^p  (4d axes)
// All throw if the boundary decay flag is raised.
double norm_Yp(const FourierGridFn& g, double p);
double norm_Y(const FourierGridFn& g);
double norm_Xp(const FourierGridFn& h, double p);

// Checks the four proof identities on discrete grids (d=1):
//   F G_t phi   = F phi(u, xi + t u)            (exact circular re-indexing)
//   F Q phi     = R(xi) F phi                   (collision as a multiplier)
//   F G2_t phi  = F phi(u, xi + tu, v, zeta + tv)
//   F Q2 phi    = (R(xi) + R(zeta)) F phi
// The transport sides are computed by physical-space shifts then transforms;
// the collision sides by direct quadrature then transforms. Mismatches are
// reported relative to the max magnitude of the reference side. Requires the
// shear displacement per cell to be an integer (throws otherwise).
struct IdentityReport {
  double transport_mismatch = 0.0;
  double collision_mismatch = 0.0;
  double doubled_transport_mismatch = 0.0;
  double doubled_collision_mismatch = 0.0;
  double max_mismatch() const;
};
IdentityReport fourier_identities_check(const CorrelationModel& model, double t);

// Randomized verification of the scintillation-operator bounds (d=1):
// general: ||K_eta h||_{X_p} <= 4 ||Rhat||_{L1} ||h||_{X_p} on random
// gaussian-mixture inputs; tensor: ||K_eta mu(x)nu||_{X_p} against
// 4 eta^d ||Rhat||_{Linf} ||mu||_{Y_p} ||nu||_{Y}. One scan of K_eta h
// serves all three p values.
enum class LemmaMode { general, tensor };
struct LemmaTrial {
  double p = 0.0;
  double keta_norm = 0.0;
  double input_norm = 0.0;  // ||h||_{X_p} (general) or ||mu||_{Y_p}||nu||_Y (tensor)
  double ratio = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // bound - ratio
};
struct Lemma31Report {
  std::vector<LemmaTrial> trials;
  double max_ratio = 0.0;
  double bound = 0.0;
  int violations = 0;           // trials with slack < -1e-6 * bound
  double max_keta_norm = 0.0;   // per (eta, p); used for the tensor eta-slope
};
Lemma31Report verify_lemma31(const CorrelationModel& model, double eta, double p, int trials,
                             LemmaMode mode, std::uint64_t seed);

// Same trials evaluated for several p values at once; the expensive K_eta
// scan is shared, so this costs the same as a single-p run.
std::vector<Lemma31Report> verify_lemma31_multi(const CorrelationModel& model, double eta,
                                                const std::vector<double>& ps, int trials,
                                                LemmaMode mode, std::uint64_t seed);

// Weighted least-squares slope of log(y) vs log(x); weights default to 1.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& w = {});

}  // namespace wavekin
