// Acceptance harness: one self-contained check per criterion, selectable with
// --criterion N (default: run all). Prints exactly one PASS/FAIL line per
// criterion; exit code 0 iff every selected criterion passes.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wavekin/experiments.hpp"
#include "wavekin/medium.hpp"
#include "wavekin/norms.hpp"
#include "wavekin/scintillation.hpp"
#include "wavekin/wigner.hpp"

using namespace wavekin;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const char* kOutRoot = "acceptance_out";

HarnessOptions options_for(const std::string& sub) {
  HarnessOptions opts;
  opts.out_dir = std::string(kOutRoot) + "/" + sub;
  opts.seed = 1;
  opts.workers = 1;
  opts.resume = true;
  return opts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- 1: pathwise unitarity --------------------------------------------------

Outcome criterion1() {
  const double eta = 0.25;
  ScreenGrid grid(1, 512, 8.0);
  Fft fft(1, 512);
  CorrelationModel model;
  model.dim = 1;
  SourceSpec spec;
  spec.kind = SourceSpec::Kind::gaussian_envelope;
  spec.alpha = 0.0;
  spec.k0 = Eigen::VectorXd::Constant(1, 1.0);
  spec.envelope_width = 1.0;
  WaveField psi0 = make_source(spec, grid, eta);
  RngStream rng(1, 0, 0xa001);
  WaveField psiT = propagate(psi0, model, 0.5, 1000, rng, fft);
  const double drift =
      std::abs(psiT.squared_norm() - psi0.squared_norm()) / psi0.squared_norm();
  std::ostringstream d;
  d << "relative L2 drift " << drift << " over 1000 steps (n=512)";
  return {drift < 1e-10, d.str()};
}

// --- 2: ensemble mean vs transport solver ------------------------------------

Outcome criterion2() {
  Config cfg = Config::parse(
      "grid.dim = 1\ngrid.extent = 8\neta = 0.25\n"
      "medium.kind = gaussian\nmedium.length = 1\nmedium.sigma2 = 1\n"
      "source.kind = gaussian_envelope\nsource.alpha = 0\nsource.k0 = 1\nsource.width = 1\n"
      "solver.T = 0.4\nensemble.n_realizations = 2000\n");
  ExperimentResult res = run_mean_field(cfg, options_for("c2"));
  return {res.pass, res.summary};
}

// --- 3: coherent damping of the mean field -----------------------------------

Outcome criterion3() {
  const double eta = 0.25, T = 0.4;
  const int n_real = 2000;
  ScreenGrid grid(1, 256, 8.0);
  Fft fft(1, 256);
  CorrelationModel model;
  model.dim = 1;
  SourceSpec spec;
  spec.kind = SourceSpec::Kind::gaussian_envelope;
  spec.alpha = 0.0;
  spec.k0 = Eigen::VectorXd::Constant(1, 1.0);
  spec.envelope_width = 1.0;
  WaveField psi0 = make_source(spec, grid, eta);
  const int steps = 2 * default_steps(spec, eta, T);

  Eigen::ArrayXcd sum = Eigen::ArrayXcd::Zero(grid.size());
  Eigen::ArrayXd sq_re = Eigen::ArrayXd::Zero(grid.size());
  Eigen::ArrayXd sq_im = Eigen::ArrayXd::Zero(grid.size());
  for (int r = 0; r < n_real; ++r) {
    RngStream rng(1, static_cast<std::uint64_t>(r), 0xa003);
    WaveField psiT = propagate(psi0, model, T, steps, rng, fft);
    sum += psiT.values;
    sq_re += psiT.values.real().square();
    sq_im += psiT.values.imag().square();
  }
  Eigen::ArrayXcd mean = sum / static_cast<double>(n_real);
  WaveField target = propagate_free(psi0, T, fft);
  target.values *= std::exp(-0.5 * model.r0() * T);

  const double peak = target.values.abs().maxCoeff();
  double max_z = 0.0;
  long used = 0;
  for (long i = 0; i < grid.size(); ++i) {
    if (std::abs(target.values[i]) < 0.05 * peak) continue;
    ++used;
    const double var_re =
        std::max(sq_re[i] / n_real - mean[i].real() * mean[i].real(), 0.0);
    const double var_im =
        std::max(sq_im[i] / n_real - mean[i].imag() * mean[i].imag(), 0.0);
    const double se = std::sqrt((var_re + var_im) / n_real) + 1e-300;
    const double z = std::abs(std::abs(mean[i]) - std::abs(target.values[i])) / se;
    max_z = std::max(max_z, z);
  }
  std::ostringstream d;
  d << "max |z| " << max_z << " over " << used
    << " grid points (|E psi| vs exp(-R0 T/2) x free field, N=2000)";
  return {max_z <= 4.0, d.str()};
}

// --- 4: coupling-operator norm bounds ----------------------------------------

Outcome criterion4() {
  CorrelationModel model;
  model.dim = 1;
  const double inf = std::numeric_limits<double>::infinity();
  bool pass = true;
  std::ostringstream d;
  const std::vector<double> p_list{1.0, 2.0, inf};
  const auto reps = verify_lemma31_multi(model, 0.5, p_list, 100, LemmaMode::general, 1);
  for (size_t ip = 0; ip < p_list.size(); ++ip) {
    const Lemma31Report& rep = reps[ip];
    pass = pass && rep.violations == 0;
    d << "general p=" << (p_list[ip] == inf ? std::string("inf") : format_double(p_list[ip]))
      << " max ratio " << rep.max_ratio << "/" << rep.bound << " viol " << rep.violations
      << "; ";
  }
  std::vector<double> xs, ys;
  for (double eta : {0.5, 0.25, 0.125, 0.0625}) {
    Lemma31Report rep = verify_lemma31(model, eta, 2.0, 10, LemmaMode::tensor, 1);
    pass = pass && rep.violations == 0;
    xs.push_back(eta);
    ys.push_back(rep.max_keta_norm);
  }
  const double slope = fit_loglog_slope(xs, ys);
  pass = pass && slope >= 1.0 - 0.3;
  d << "tensor eta-slope " << slope << " (target >= 0.7)";
  return {pass, d.str()};
}

// --- 5: Fourier semigroup identities ------------------------------------------

Outcome criterion5() {
  CorrelationModel model;
  model.dim = 1;
  IdentityReport rep = fourier_identities_check(model, 0.5);
  std::ostringstream d;
  d << "max relative mismatch " << rep.max_mismatch()
    << " (transport/collision, single and doubled)";
  return {rep.max_mismatch() < 1e-12, d.str()};
}

// --- 6: norm closed forms ------------------------------------------------------

Outcome criterion6() {
  auto sample = [](int n, double step) {
    std::vector<AxisSpec> axes = {centered_axis(n, step), centered_axis(n, step)};
    return sample_fourier(axes, [](const Eigen::VectorXd& s) {
      return std::complex<double>(kTwoPi * std::exp(-0.5 * s.squaredNorm()), 0.0);
    });
  };
  FourierGridFn coarse = sample(129, 0.125);
  FourierGridFn fine = sample(257, 0.0625);
  const double inf = std::numeric_limits<double>::infinity();
  struct Row {
    const char* name;
    double got, want;
  };
  const Row rows[] = {
      {"Y_inf", norm_Yp(fine, inf), kTwoPi},
      {"Y_1", norm_Yp(fine, 1.0), kTwoPi * std::sqrt(kTwoPi)},
      {"Y_2", norm_Yp(fine, 2.0), kTwoPi * std::pow(kPi, 0.25)},
      {"Y", norm_Y(fine), kTwoPi * std::sqrt(kTwoPi)},
  };
  bool pass = true;
  double worst = 0.0;
  for (const Row& r : rows) {
    const double rel = std::abs(r.got - r.want) / r.want;
    worst = std::max(worst, rel);
    pass = pass && rel < 1e-6;
  }
  // One refinement step moves the values by less than the acceptance margin.
  const double drift = std::abs(norm_Yp(fine, 1.0) - norm_Yp(coarse, 1.0)) / norm_Yp(fine, 1.0);
  pass = pass && drift < 1e-6;
  std::ostringstream d;
  d << "worst relative error " << worst << ", refinement drift " << drift
    << " (gaussian Y/Y_p suite)";
  return {pass, d.str()};
}

// --- 7: kinetic solver cross-validation ----------------------------------------

Outcome criterion7() {
  struct Instance {
    const char* medium;
    double length, f_center, f_width, T;
  };
  const Instance instances[] = {
      {"gaussian", 1.0, 1.0, 1.0, 0.5}, {"gaussian", 1.0, 0.5, 0.7, 0.4},
      {"gaussian", 0.8, 1.5, 1.0, 0.6}, {"gaussian", 1.2, 0.0, 0.8, 0.5},
      {"gaussian", 1.0, 1.0, 1.2, 0.7}, {"gaussian", 0.7, 0.8, 1.0, 0.3},
      {"matern", 1.0, 1.0, 1.0, 0.5},   {"matern", 1.0, 0.5, 0.8, 0.4},
      {"matern", 1.3, 1.2, 1.0, 0.6},   {"matern", 0.8, 0.0, 1.0, 0.5},
  };
  bool pass = true;
  int idx = 0, failed = 0;
  for (const Instance& in : instances) {
    std::ostringstream cfg_text;
    cfg_text << "grid.dim = 1\nmedium.kind = " << in.medium
             << "\nmedium.length = " << in.length << "\nmedium.sigma2 = 1\n"
             << "solver.T = " << in.T << "\nkinetic.n_particles = 100000\n"
             << "kinetic.f_center = " << in.f_center << "\nkinetic.f_width = " << in.f_width
             << "\n";
    Config cfg = Config::parse(cfg_text.str());
    HarnessOptions opts = options_for("c7/i" + std::to_string(idx++));
    ExperimentResult res = run_kinetic(cfg, opts);
    if (!res.pass) ++failed;
    pass = pass && res.pass;
  }
  // Truncation remainder bound: adding expansion orders moves the value by at
  // most the claimed factorial remainder.
  CorrelationModel model;
  model.dim = 1;
  PhaseSpaceFn fa0 = [](const Eigen::VectorXd&, const Eigen::VectorXd& xi) {
    return std::complex<double>(
        std::sqrt(kTwoPi) * std::exp(-0.5 * xi[0] * xi[0]) * std::cos(xi[0]),
        -std::sqrt(kTwoPi) * std::exp(-0.5 * xi[0] * xi[0]) * std::sin(xi[0]));
  };
  Eigen::VectorXd u = Eigen::VectorXd::Constant(1, 0.3);
  Eigen::VectorXd k = Eigen::VectorXd::Constant(1, -0.2);
  auto lo = kinetic_solve_fourier_point(fa0, model, 0.7, 4, 129, u, k);
  auto hi = kinetic_solve_fourier_point(fa0, model, 0.7, 8, 129, u, k);
  const bool trunc_ok = std::abs(hi.value - lo.value) <= lo.truncation_bound * 1.05 + 1e-14;
  pass = pass && trunc_ok;
  std::ostringstream d;
  d << (10 - failed) << "/10 instances within 3 sigma; truncation bound "
    << (trunc_ok ? "obeyed" : "VIOLATED");
  return {pass, d.str()};
}

// --- 8: variance decay, spatial-smoothing sweep (d=1) ---------------------------

Outcome criterion8() {
  Config cfg = Config::parse(
      "grid.dim = 1\ngrid.extent = 8\n"
      "medium.kind = gaussian\nmedium.length = 1\nmedium.sigma2 = 1\n"
      "source.kind = gaussian_envelope\nsource.alpha = 0\nsource.k0 = 1\nsource.width = 1\n"
      "scaling.s1_list = 0, 0.25, 0.5\nscaling.s2 = 0\nscaling.beta = 1\n"
      "eta.list = 0.25, 0.125, 0.0625, 0.03125\n"
      "solver.T = 0.4\nensemble.n_realizations = 1000\n");
  ExperimentResult res = run_scaling_sweep(cfg, options_for("c8"));
  return {res.pass, res.summary};
}

// --- 9: variance decay, source-concentration sweep (d=2) ------------------------

Outcome criterion9() {
  Config cfg = Config::parse(
      "grid.dim = 2\ngrid.extent = 2\n"
      "medium.kind = gaussian\nmedium.length = 1\nmedium.sigma2 = 1\n"
      "source.kind = gaussian_envelope\nsource.k0 = 0, 0\nsource.width = 1\n"
      "scaling.alpha_list = 0, 1\nscaling.s2 = 0\nobs.wk = 1.6\n"
      "eta.list = 0.25, 0.125, 0.0625\n"
      // T large enough that ballistic decorrelation (T dk vs eta l) reaches
      // the asymptotic variance regime within the pinned eta range.
      "solver.T = 0.6\nensemble.n_realizations = 500\n");
  ExperimentResult res = run_scaling_sweep(cfg, options_for("c9"));
  return {res.pass, res.summary};
}

// --- 10: scaled-variance limit (d=2) and the limit-source oracle ----------------

Outcome criterion10() {
  // Finite-width oracle for the collapsed (hyperplane + shifted-manifold)
  // integrals in the limit source.
  CorrelationModel model;
  model.dim = 2;
  GaussianProfile f;
  f.center = Eigen::VectorXd::Zero(2);
  f.center << 0.0, 0.4;
  f.width = 1.0 / std::sqrt(2.0);
  f.amp = 1.0;
  Eigen::VectorXd p(2), q(2);
  p << 0.7, 0.1;
  q << -0.2, 0.6;
  // Gaussian-regularized deltas: the exchange collapse argument has a
  // critical point (level-set jump), where a Fourier sin window converges
  // only like 1/S; the gaussian window suppresses it like e^{-S^2 tc^2 / 2}.
  // du resolves the 1/S window width across |grad theta| <= |p-q| + 2|u|.
  // The remaining smooth window bias is O(1/S^2), removed by Richardson
  // extrapolation between S and sqrt(2) S.
  const double umax = 6.0;
  auto oracle_at = [&](double S, double du) {
    const int n = static_cast<int>(2.0 * umax / du);
    double acc = 0.0;
    Eigen::VectorXd u(2);
    for (int i = 0; i < n; ++i) {
      u[0] = -umax + (i + 0.5) * du;
      for (int j = 0; j < n; ++j) {
        u[1] = -umax + (j + 0.5) * du;
        const double dot = u.dot(p - q);
        const double sh = dot - u.squaredNorm();
        const double kern = std::sqrt(kTwoPi) * S * std::exp(-0.5 * S * S * dot * dot);
        const double kern_sh = std::sqrt(kTwoPi) * S * std::exp(-0.5 * S * S * sh * sh);
        const double pair_ff = std::exp(-u.squaredNorm() / (4.0 * f.width * f.width));
        acc += spectrum_eval(model, u) * pair_ff * f.eval(p - u / 2) *
               (kern * f.eval(q - u / 2) - kern_sh * f.eval(q + u / 2));
      }
    }
    return acc * du * du / (kTwoPi * kTwoPi);
  };
  const double oracle = 2.0 * oracle_at(40.0 * std::sqrt(2.0), 0.0015) - oracle_at(40.0, 0.002);
  const double direct = eval_J0_kernel(f, model, p, q);
  const double oracle_rel = std::abs(direct - oracle) / std::max(std::abs(oracle), 1e-300);
  const bool oracle_ok = oracle_rel < 1e-3;

  Config cfg = Config::parse(
      "grid.dim = 2\ngrid.extent = 2\n"
      "medium.kind = gaussian\nmedium.length = 1\nmedium.sigma2 = 1\n"
      "source.kind = gaussian_envelope\nsource.alpha = 1\nsource.k0 = 0, 0\nsource.width = 1\n"
      "obs.wk = 1.6\neta.list = 0.25, 0.125, 0.0625\n"
      "solver.T = 0.3\nensemble.n_realizations = 500\nkinetic.n_particles = 200000\n");
  ExperimentResult res = run_theorem2(cfg, options_for("c10"));
  std::ostringstream d;
  d << res.summary << "; J0 evaluator vs finite-S oracle rel err " << oracle_rel;
  return {res.pass && oracle_ok, d.str()};
}

// --- 11: bitwise reproducibility across worker counts ---------------------------

Outcome criterion11() {
  const std::string cfg_text =
      "grid.dim = 1\ngrid.extent = 8\n"
      "medium.kind = gaussian\nmedium.length = 1\nmedium.sigma2 = 1\n"
      "source.kind = gaussian_envelope\nsource.alpha = 0\nsource.k0 = 1\nsource.width = 1\n"
      "scaling.s1_list = 0\nscaling.beta = 1\neta.list = 0.5, 0.25\n"
      "solver.T = 0.2\nensemble.n_realizations = 32\n";
  std::vector<std::string> outputs;
  for (int workers : {1, 4, 8, 1}) {  // trailing 1: rerun-identity
    Config cfg = Config::parse(cfg_text);
    HarnessOptions opts = options_for("c11/w" + std::to_string(workers) + "_" +
                                      std::to_string(outputs.size()));
    opts.workers = workers;
    opts.resume = false;
    try {
      run_scaling_sweep(cfg, opts);
    } catch (const std::exception&) {
      // The tiny ensemble may fail its own slope gate; only byte identity of
      // the emitted table matters here.
    }
    outputs.push_back(read_file(opts.out_dir + "/scaling.csv"));
  }
  bool pass = true;
  for (size_t i = 1; i < outputs.size(); ++i) pass = pass && outputs[i] == outputs[0];
  std::ostringstream d;
  d << "scaling.csv byte-identical across workers {1,4,8} and rerun: "
    << (pass ? "yes" : "NO") << " (" << outputs[0].size() << " bytes)";
  return {pass, d.str()};
}

const char* kNames[] = {
    "pathwise L2 conservation",
    "ensemble mean field vs transport solver",
    "coherent mean-field damping",
    "coupling-operator norm bounds",
    "Fourier semigroup identities",
    "norm closed forms",
    "kinetic solver cross-validation (MC vs expansion)",
    "variance decay vs smoothing exponent (d=1)",
    "variance decay vs source concentration (d=2)",
    "scaled-variance limit and limit-source oracle (d=2)",
    "bitwise reproducibility across worker counts",
};

Outcome run_criterion(int i) {
  switch (i) {
    case 1: return criterion1();
    case 2: return criterion2();
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6();
    case 7: return criterion7();
    case 8: return criterion8();
    case 9: return criterion9();
    case 10: return criterion10();
    case 11: return criterion11();
    default: return {false, "unknown criterion"};
  }
}

}  // namespace

int main(int argc, char** argv) {
  int which = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) which = std::atoi(argv[i + 1]);
  std::filesystem::create_directories(kOutRoot);

  bool all_pass = true;
  for (int i = 1; i <= 11; ++i) {
    if (which != 0 && i != which) continue;
    Outcome out;
    try {
      out = run_criterion(i);
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d [%s] %s: %s\n", i, out.pass ? "PASS" : "FAIL", kNames[i - 1],
                out.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
