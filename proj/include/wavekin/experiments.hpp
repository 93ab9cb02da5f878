#pragma once

#include <cstdint>
#include <string>

#include "wavekin/config.hpp"
#include "wavekin/correlation.hpp"
#include "wavekin/kinetic.hpp"
#include "wavekin/schrodinger.hpp"
#include "wavekin/table.hpp"

namespace wavekin {

struct HarnessOptions {
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int workers = 1;
  bool resume = false;
};

struct ExperimentResult {
  ResultTable table;
  bool pass = true;
  std::string summary;
};

// Predicted decay exponent of the paired scintillation <J_eta, phi x phi>
// in eta: max(alpha - beta, 0) - 2 d s2 + max(d (1 - alpha - 2 s1),
// d (1 - 2 alpha - s1)). For eta < 1 the minimum of the two eta-power bounds
// is the maximum exponent.
double theoretical_exponent(double alpha, double beta, double s1, double s2, int d);

// Shared config plumbing.
CorrelationModel model_from_config(const Config& cfg);
SourceSpec source_from_config(const Config& cfg, int dim);

// Closed-form F a0(u, xi) of the Wigner transform of the gaussian-envelope
// modulated plane source (per-axis gaussian in u and xi with an e^{-i xi.k0}
// phase). Exact at every eta.
PhaseSpaceFn fa0_gaussian_envelope(int dim, double eta, double alpha,
                                   const Eigen::VectorXd& k0, double width);

// Single SPDE realization with snapshot dumps (CSV of norm drift + raw
// |psi|^2 arrays).
ExperimentResult run_simulate(const Config& cfg, const HarnessOptions& opts);

// Deterministic kinetic solves: jump-process Monte Carlo vs the truncated
// collision expansion on paired observables.
ExperimentResult run_kinetic(const Config& cfg, const HarnessOptions& opts);

// Ensemble mean of <W_eta, phi> from the wave pipeline vs the kinetic solver
// pairing; z-score per test function.
ExperimentResult run_mean_field(const Config& cfg, const HarnessOptions& opts);

// Variance of <W_eta, phi> across the eta list, log-log slope fit per
// (alpha, s1) entry against the predicted exponent. Checkpointed per eta
// point when opts.resume is set.
ExperimentResult run_scaling_sweep(const Config& cfg, const HarnessOptions& opts);

// eta^{-1} Var(<W_eta, phi>) against the doubled limit solver pairing;
// relative gap per eta. d = 2. Checkpointed like the scaling sweep.
ExperimentResult run_theorem2(const Config& cfg, const HarnessOptions& opts);

// Functional-norm verifications: Fourier identities and the operator bounds.
ExperimentResult run_norms(const Config& cfg, const HarnessOptions& opts);

// Re-emit SVG plots from a stored CSV table.
ExperimentResult run_report(const Config& cfg, const HarnessOptions& opts);

// Writes table.csv (and optional plots inside the runners) under
// opts.out_dir; stamps the manifest with the config hash and seed.
void emit_table(ResultTable& table, const Config& cfg, const HarnessOptions& opts,
                const std::string& name);

}  // namespace wavekin
