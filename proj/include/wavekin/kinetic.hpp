#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <vector>

#include "wavekin/correlation.hpp"
#include "wavekin/norms.hpp"
#include "wavekin/rng.hpp"

namespace wavekin {

// ---------------------------------------------------------------------------
// Particle representation of a phase-space density a(x, k) = sum_i w_i
// delta(x - x_i) delta(k - k_i).

struct Particle {
  Eigen::VectorXd x;
  Eigen::VectorXd k;
  double weight = 0.0;
  int n_jumps = 0;
};

struct ParticleEnsemble {
  int dim = 1;
  double t = 0.0;
  std::vector<Particle> parts;

  double total_weight() const;
};

// Isotropic gaussian radiation profile f(k) = amp * exp(-|k - center|^2 / (2 width^2)).
struct GaussianProfile {
  Eigen::VectorXd center;
  double width = 1.0;
  double amp = 1.0;

  double eval(const Eigen::VectorXd& k) const;
  double mass() const;  // integral over R^dim, dim = center.size()
};

// Particles for the localized initial condition a0 = delta(x) f(k):
// x = 0, k ~ f/mass, equal weights mass/N.
ParticleEnsemble sample_gaussian_delta_source(const GaussianProfile& f, int n_particles,
                                              RngStream& rng);

// Damped free flight: a0(x - t k, k) e^{-R0 t}.
ParticleEnsemble ballistic(const ParticleEnsemble& a0, double t, double r0);

// Jump-process solve of the transport equation: exponential flight times of
// rate R0, scattering kernel density Rhat(k - q) / ((2 pi)^d R0), weights
// unchanged (gain and loss balance). Exact inverse-transform sampling per
// correlation kind; sigma2 = 0 degenerates to pure transport.
ParticleEnsemble kinetic_solve_mc(const ParticleEnsemble& a0, const CorrelationModel& model,
                                  double T, RngStream& rng);

// One draw from the scattering kernel density Rhat(k - q)/((2 pi)^d R0).
Eigen::VectorXd sample_scatter_kernel(const CorrelationModel& model, const Eigen::VectorXd& k,
                                      RngStream& rng);

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

// <a, phi> = sum_i w_i phi(x_i, k_i) with the particle-spread standard error.
McEstimate pair_particles(const ParticleEnsemble& ens,
                          const std::function<double(const Eigen::VectorXd&,
                                                     const Eigen::VectorXd&)>& phi);

// ---------------------------------------------------------------------------
// Fourier-side solver. F a0(u, k) supplied as a closed-form evaluator.

using PhaseSpaceFn =
    std::function<std::complex<double>(const Eigen::VectorXd& u, const Eigen::VectorXd& k)>;

std::complex<double> ballistic_fourier(const PhaseSpaceFn& fa0, double t, double r0,
                                       const Eigen::VectorXd& u, const Eigen::VectorXd& k);

// Truncated collision (Duhamel) expansion evaluated at one point: the n-th
// iterate telescopes into a scalar Volterra recursion along the backward
// characteristic,
//   F a^n(t,u,k) = e^{-R0 t} S_n(t) F a0(u, k + t u),
//   S_0 = 1,  S_n(t) = int_0^t R(k + (t - s) u) S_{n-1}(s) ds,
// integrated by iterated trapezoid on time_nodes nodes. truncation_bound is
// the exponential-tail remainder |F a0| e^{-R0 t} (R0 t)^{n+1}/(n+1)! e^{R0 t}.
struct FourierKineticResult {
  std::complex<double> value{0.0, 0.0};
  double truncation_bound = 0.0;
  std::vector<std::complex<double>> terms;  // per collision order, 0..n_terms
};
FourierKineticResult kinetic_solve_fourier_point(const PhaseSpaceFn& fa0,
                                                 const CorrelationModel& model, double T,
                                                 int n_terms, int time_nodes,
                                                 const Eigen::VectorXd& u,
                                                 const Eigen::VectorXd& k);

// Grid wrapper: samples F a(T) on a (u..., k...) grid of 2*dim axes.
FourierGridFn kinetic_solve_fourier(const std::vector<AxisSpec>& axes, const PhaseSpaceFn& fa0,
                                    const CorrelationModel& model, double T, int n_terms,
                                    int time_nodes);

// Discrete Y-norm of a - a^0 (left side of the t^{1-d} bound) and the raw
// bound factor t^{1-d} * int sup_v |F a0(v, xi)| dxi (right side before the
// one-point constant calibration).
struct ScatteredNormResult {
  double lhs = 0.0;
  double rhs_factor = 0.0;
};
ScatteredNormResult scattered_norm_check(const std::vector<AxisSpec>& axes,
                                         const PhaseSpaceFn& fa0, const CorrelationModel& model,
                                         double t, int n_terms, int time_nodes);

// ---------------------------------------------------------------------------
// Limit scintillation source (d >= 2):
//   J0(t, x, k, y, p) = e^{-2 R0 t} delta(x - t k) delta(y - t p) H(k, p),
//   H(p, q) = 2 pi (2 pi)^{-d} int Rhat(u) e^{-|u|^2 / (4 w^2)} f(p - u/2) *
//             [delta(u.(p-q)) f(q - u/2) - delta(u.(p-q) - |u|^2) f(q + u/2)] du,
// where w is the gaussian profile width. The second moment couples the two
// source amplitudes pairwise through their ambiguity function at momentum
// offset u, which for a gaussian equals the Wigner profile at the midpoint
// times e^{-|u|^2 / (8 w^2)} per pair; the two pairs give the common
// e^{-|u|^2 / (4 w^2)} form factor. The direct pair term collapses onto the
// hyperplane u perp (p - q); the exchange term carries an extra |u|^2 phase
// shift, so it collapses onto the circle through 0 and p - q instead. The
// shift makes H integrate to zero over (p, q), matching the exactly conserved
// total energy. Throws on p = q (degenerate delta).
double eval_J0_source(const GaussianProfile& f, const CorrelationModel& model, double t,
                      const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// H(p, q) alone (no e^{-2 R0 t} damping).
double eval_J0_kernel(const GaussianProfile& f, const CorrelationModel& model,
                      const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// ---------------------------------------------------------------------------
// Doubled (fourth-order) solvers for the limit equation. The scintillation
// births happen on time scales O(eta) only, so the limit J solves the
// homogeneous doubled kinetic equation
//   (d/dt + T2 + 2 R0 - Q2) J = 0,  J(0) = delta(x) delta(y) H(k, p);
// equivalently the Duhamel form J = J0 + int_0^t G_{t-s} Q2 J(s) ds with
// J0(t) the free flow of that initial measure. (Reading J0 as a source
// density active at all times would add a spurious factor of t.)

// Doubled test pairing phi(x,k) phi'(y,p) with gaussian factors.
struct DoubledObservable {
  double estimate = 0.0;
  double stderr_ = 0.0;
  long n_particles = 0;
};

// Monte Carlo for <J(T), phi ox phi'>: birth at t = 0, x = y = 0 with
// momenta (p, q) ~ |H|/Z and signed weights Z sgn(H), then independent
// rate-R0 jump transport of each factor over [0, T] (the conservative jump
// process realizes the 2 R0 damping and the Q2 gain together). d >= 2 (the
// initial measure is degenerate in d = 1).
DoubledObservable doubled_solve_mc(
    const GaussianProfile& f, const CorrelationModel& model, double T,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& phi_xk,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& phi_yp,
    int n_particles, RngStream& rng, double eps_diag = 0.05);

// Fourier-side source evaluator F S(s; u, xi, v, zeta) for the doubled solver.
using DoubledSourceFn = std::function<std::complex<double>(
    double s, const Eigen::VectorXd& u, const Eigen::VectorXd& xi, const Eigen::VectorXd& v,
    const Eigen::VectorXd& zeta)>;

// Per-point Neumann solve of the doubled Duhamel formula in Fourier
// variables along backward characteristics (any dimension; grids are the
// caller's concern). Returns F J(T, u, xi, v, zeta).
std::complex<double> doubled_solve_fourier_point(const DoubledSourceFn& fsource,
                                                 const CorrelationModel& model, double T,
                                                 int n_terms, int time_nodes,
                                                 const Eigen::VectorXd& u,
                                                 const Eigen::VectorXd& xi,
                                                 const Eigen::VectorXd& v,
                                                 const Eigen::VectorXd& zeta);

// Grid wrapper on a 4-axis (u, xi, v, zeta) grid; d = 1 only.
FourierGridFn doubled_solve_fourier(const std::vector<AxisSpec>& axes,
                                    const DoubledSourceFn& fsource,
                                    const CorrelationModel& model, double T, int n_terms,
                                    int time_nodes);

}  // namespace wavekin
