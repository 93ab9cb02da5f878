// Command-line front end: each subcommand loads a key=value config, runs the
// matching experiment and writes its CSV/SVG outputs under --out.
#include <CLI11.hpp>
#include <cstdio>
#include <functional>

#include "wavekin/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wavekin: wave scintillation simulation and verification toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  wavekin::HarnessOptions opts;

  struct Sub {
    const char* name;
    const char* desc;
    std::function<wavekin::ExperimentResult(const wavekin::Config&,
                                            const wavekin::HarnessOptions&)> run;
  };
  const Sub subs[] = {
      {"simulate", "single stochastic propagation with snapshots", wavekin::run_simulate},
      {"kinetic", "Monte Carlo vs collision-expansion transport solve", wavekin::run_kinetic},
      {"meanfield", "ensemble mean of Wigner observables vs the transport solver",
       wavekin::run_mean_field},
      {"scaling", "variance decay exponents across an eta sweep", wavekin::run_scaling_sweep},
      {"theorem2", "scaled variance against the limit covariance solver",
       wavekin::run_theorem2},
      {"norms", "Fourier identities and operator-bound checks", wavekin::run_norms},
      {"report", "re-plot a stored result table", wavekin::run_report},
  };
  const Sub* chosen = nullptr;
  for (const Sub& s : subs) {
    CLI::App* c = app.add_subcommand(s.name, s.desc);
    c->add_option("-c,--config", config_path, "key=value config file")->required();
    c->add_option("-o,--out", opts.out_dir, "output directory (default out)");
    c->add_option("-s,--seed", opts.seed, "master seed (default 1)");
    c->add_option("-w,--workers", opts.workers, "worker threads (default 1)");
    c->add_flag("-r,--resume", opts.resume, "reuse checkpointed ensemble points");
    c->callback([&chosen, &s]() { chosen = &s; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    wavekin::Config cfg = wavekin::Config::load(config_path);
    wavekin::ExperimentResult res = chosen->run(cfg, opts);
    std::printf("%s: %s\n%s\n", chosen->name, res.pass ? "PASS" : "FAIL", res.summary.c_str());
    return res.pass ? 0 : 1;
  } catch (const wavekin::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
