#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "wavekin/correlation.hpp"
#include "wavekin/kinetic.hpp"
#include "wavekin/mixture.hpp"
#include "wavekin/norms.hpp"

namespace wavekin {

struct ScintillationEstimate {
  double value = 0.0;    // unbiased covariance, divisor N - 1
  double stderr_ = 0.0;  // delta-method standard error from fourth moments
  long n = 0;
};

// Running means and centered cross-moments over realizations of a set of
// paired observables <W, phi>. Per-realization values are retained for the
// fourth-moment error bars; merge replays the concatenated stream through the
// same one-pass update, so it is bitwise identical to accumulating A then B.
class EnsembleAccumulator {
 public:
  int register_observable(const std::string& name);
  int id_of(const std::string& name) const;  // -1 if absent
  int n_observables() const { return static_cast<int>(names_.size()); }
  long count() const { return n_; }

  // One realization: a value for every registered observable, in id order.
  void accumulate(const std::vector<double>& values);
  void merge(const EnsembleAccumulator& other);

  double mean(int i) const;
  const std::vector<double>& samples(int i) const;
  const std::string& name(int i) const { return names_.at(i); }

  // Covariance of observables i and j (variance when i == j). Throws if N < 2.
  ScintillationEstimate estimate(int i, int j) const;

 private:
  void push(const std::vector<double>& values);

  std::vector<std::string> names_;
  long n_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd comoment_;  // sum of (x_i - mean_i)(x_j - mean_j)
  std::vector<std::vector<double>> samples_;  // [observable][realization]
};

// Chebyshev consistency probe: the covariance bound value/delta^2 against the
// empirical frequency of |<W,phi> - mean| >= delta.
struct ChebyshevReport {
  double bound = 0.0;
  double bound_stderr = 0.0;
  double empirical = 0.0;
  bool violation = false;  // empirical > bound + 4 bound standard errors
};
ChebyshevReport chebyshev_probe(const ScintillationEstimate& est, double delta, long deviations,
                                long total);

// Applies the scintillation coupling operator in Fourier variables on a
// 4-axis (u, xi, v, zeta) grid (d = 1):
//   F K_eta h = -(4 / 2pi) int Rhat(w) sin(w xi / 2) sin(w zeta / 2)
//               F h(u - w/eta, xi, v + w/eta, zeta) dw,
// by quadrature with w nodes at integer multiples of eta * du so every shift
// lands on the grid; out-of-range shifts read as zero (compact support).
// Requires du == dv and a w step fine enough to resolve Rhat (throws
// otherwise). Linear in h; zero when sigma2 = 0.
FourierGridFn apply_K_eta(const FourierGridFn& h, const CorrelationModel& model, double eta);

// Closed-form F K_eta h at one point when h is a 4-axis gaussian mixture
// (F h given by GaussianMixture::fourier) and the medium is gaussian: the w
// integral is a gaussian times a complex exponential and evaluates exactly.
// Gaussian correlation kind only (throws otherwise).
std::complex<double> eval_K_eta_mixture(const GaussianMixture& h, const CorrelationModel& model,
                                        double eta, double u, double xi, double v, double zeta);

// Same closed form with the per-part constants (widths, displaced-gaussian
// variance, log prefactor) hoisted out of the point evaluation, for tight
// scan loops over many points with a fixed mixture.
class KEtaMixtureEvaluator {
 public:
  KEtaMixtureEvaluator(const GaussianMixture& h, const CorrelationModel& model, double eta);
  std::complex<double> operator()(double u, double xi, double v, double zeta) const;

 private:
  struct Part {
    double wu2, wx2, wv2, wz2;  // squared widths
    double cu, cx, cv, cz;      // centers
    double inv2A;               // 1 / (2 A)
    double bu, bv;              // B = bu u + bv v
    double c_base;              // (cu - cv) / eta
    double logpref;             // point-independent log magnitude
    std::complex<double> amplitude;
  };
  std::vector<Part> parts_;
};

// Decay of the source mismatch || K_eta a x a (s) - K_eta a0 x a0 (s) ||_{X_inf}
// against eta^d / s^{d-1} (capped at 1), d = 1. The kinetic Fourier solution
// F a(s) is cached on a (u, xi) grid per s; the X_inf supremum is scanned on a
// coarse point set with on-grid Fourier shifts.
struct SourceErrorRow {
  double eta = 0.0;
  double s = 0.0;
  double lhs = 0.0;    // discrete X_inf of the mismatch
  double bound = 0.0;  // min(eta^d / s^{d-1}, 1)
};
struct SourceErrorTable {
  std::vector<SourceErrorRow> rows;
  double eta_slope = 0.0;    // fitted d log(lhs) / d log(eta) at the first s
  double calibration = 0.0;  // constant fixed at the first row
  bool bound_ok = false;     // lhs <= 1.1 * calibration * bound everywhere
};
SourceErrorTable source_error_decay(const CorrelationModel& model, const PhaseSpaceFn& fa0,
                                    const std::vector<double>& etas,
                                    const std::vector<double>& s_list, int n_terms = 4,
                                    int time_nodes = 33);

}  // namespace wavekin
