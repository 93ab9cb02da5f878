#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wavekin/ensemble.hpp"
#include "wavekin/experiments.hpp"
#include "wavekin/svg.hpp"
#include "wavekin/wigner.hpp"

using namespace wavekin;

namespace {

std::string tmp_dir() {
  static std::string dir = [] {
    std::string d = "test_tmp";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("predicted decay exponents") {
  CHECK(theoretical_exponent(0.0, 1.0, 0.0, 0.0, 2) == doctest::Approx(2.0));
  CHECK(theoretical_exponent(1.0, 0.0, 0.0, 0.0, 2) == doctest::Approx(1.0));
  CHECK(theoretical_exponent(0.0, 1.0, 0.5, 0.0, 2) == doctest::Approx(1.0));
  // d = 1 spatial-smoothing sweep: exponent 1 - s1 at alpha = 0, beta = 1.
  for (double s1 : {0.0, 0.25, 0.5})
    CHECK(theoretical_exponent(0.0, 1.0, s1, 0.0, 1) == doctest::Approx(1.0 - s1));
}

TEST_CASE("config parsing, fallbacks and hashing") {
  Config a = Config::parse("grid.dim = 1\n# comment\neta = 0.25\nsource.k0 = 1.0, 2.0\n");
  CHECK(a.get_int("grid.dim") == 1);
  CHECK(a.get_double("eta") == doctest::Approx(0.25));
  CHECK(a.get_double("missing", 7.0) == doctest::Approx(7.0));
  auto list = a.get_list("source.k0");
  REQUIRE(list.size() == 2);
  CHECK(list[1] == doctest::Approx(2.0));
  CHECK_THROWS_AS((void)a.get("absent"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse("novalue\n"), ConfigError);

  // Hash depends on content, not ordering or comments.
  Config b = Config::parse("eta=0.25\nsource.k0=1.0, 2.0\ngrid.dim=1\n");
  CHECK(a.hash_hex() == b.hash_hex());
  Config c = Config::parse("eta=0.5\nsource.k0=1.0, 2.0\ngrid.dim=1\n");
  CHECK(a.hash_hex() != c.hash_hex());
  CHECK(a.hash_hex().size() == 16);
}

TEST_CASE("result tables round-trip through CSV bitwise") {
  ResultTable t;
  t.columns = {"x", "label", "n"};
  t.add_manifest("config_hash", "abc123");
  t.start_row();
  t.cell(1.0 / 3.0);
  t.cell(std::string("point"));
  t.cell(42L);
  t.start_row();
  t.cell(-2.5e-17);
  t.cell(std::string("tiny"));
  t.cell(0L);
  const std::string path = tmp_dir() + "/roundtrip.csv";
  write_csv(t, path);
  ResultTable r = read_csv(path);
  CHECK(r.columns == t.columns);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows == t.rows);
  CHECK(std::stod(r.rows[0][0]) == 1.0 / 3.0);  // %.17g preserves the double exactly
  bool found = false;
  for (const auto& [k, v] : r.manifest) found = found || (k == "config_hash" && v == "abc123");
  CHECK(found);
}

TEST_CASE("raw dumps carry a descriptive sidecar") {
  const std::string path = tmp_dir() + "/field.raw";
  std::vector<double> data = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  write_raw(path, data.data(), 6, {2, 3}, "axes = test");
  CHECK(std::filesystem::file_size(path) == 48);
  std::ifstream side(path + ".txt");
  REQUIRE(side.good());
  std::string text((std::istreambuf_iterator<char>(side)), std::istreambuf_iterator<char>());
  CHECK(text.find("shape = 2 3") != std::string::npos);
  CHECK(text.find("axes = test") != std::string::npos);
}

TEST_CASE("indexed ensembles are independent of the worker count") {
  auto task = [](long i) {
    RngStream rng(9, static_cast<std::uint64_t>(i), 5);
    return std::vector<double>{rng.gaussian(), rng.uniform()};
  };
  auto seq = run_indexed(64, 1, task);
  auto par = run_indexed(64, 4, task);
  REQUIRE(seq.size() == par.size());
  for (size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i][0] == par[i][0]);  // bitwise
    CHECK(seq[i][1] == par[i][1]);
  }
  auto boom = [](long i) -> std::vector<double> {
    if (i == 17) throw std::runtime_error("boom");
    return {0.0};
  };
  CHECK_THROWS_WITH(run_indexed(32, 4, boom), "boom");
}

TEST_CASE("closed-form source Wigner data matches the wave pipeline") {
  const double eta = 0.5, alpha = 0.0, width = 1.0, k0 = 1.0;
  Config cfg = Config::parse(
      "grid.dim = 1\ngrid.extent = 8\ngrid.n = 128\n"
      "source.kind = gaussian_envelope\nsource.alpha = 0\nsource.k0 = 1.0\nsource.width = 1\n");
  SourceSpec spec = source_from_config(cfg, 1);
  ScreenGrid grid(1, 128, 8.0);
  WaveField psi0 = make_source(spec, grid, eta);
  TestFunction phi = make_test_function(1, eta, 0.0, 0.0, Eigen::VectorXd::Constant(1, 0.3),
                                        Eigen::VectorXd::Constant(1, 1.2));
  const double direct = pair_field(psi0, phi);

  PhaseSpaceFn fa0 =
      fa0_gaussian_envelope(1, eta, alpha, Eigen::VectorXd::Constant(1, k0), width);
  // F a0(0,0) = ||psi0||^2.
  Eigen::VectorXd z = Eigen::VectorXd::Zero(1);
  CHECK(fa0(z, z).real() == doctest::Approx(psi0.squared_norm()).epsilon(1e-6));

  const int nq = 300;
  const double umax = 12.0, ximax = 12.0;
  std::complex<double> acc = 0.0;
  Eigen::VectorXd u(1), xi(1);
  for (int i = 0; i < nq; ++i) {
    u[0] = -umax + (i + 0.5) * 2.0 * umax / nq;
    for (int j = 0; j < nq; ++j) {
      xi[0] = -ximax + (j + 0.5) * 2.0 * ximax / nq;
      acc += fa0(u, xi) * std::conj(phi.fourier(u, xi));
    }
  }
  const double paired =
      acc.real() * (2.0 * umax / nq) * (2.0 * ximax / nq) / (kTwoPi * kTwoPi);
  CHECK(direct == doctest::Approx(paired).epsilon(1e-4));
}

TEST_CASE("config plumbing validates models and sources") {
  Config bad = Config::parse("grid.dim = 1\nmedium.kind = fractal\n");
  CHECK_THROWS_AS((void)model_from_config(bad), ConfigError);
  Config wrongk0 = Config::parse("grid.dim = 2\nsource.k0 = 1.0\n");
  CHECK_THROWS_AS((void)source_from_config(wrongk0, 2), ConfigError);
  Config ok = Config::parse(
      "grid.dim = 2\nmedium.kind = matern\nmedium.length = 0.8\nmedium.sigma2 = 1.5\n");
  CorrelationModel m = model_from_config(ok);
  CHECK(m.kind == CorrelationModel::Kind::matern_like);
  CHECK(m.dim == 2);
  CHECK(m.sigma2 == doctest::Approx(1.5));
}

TEST_CASE("log-log plots are written as valid SVG") {
  PlotSeries s;
  s.label = "decay";
  s.x = {0.5, 0.25, 0.125};
  s.y = {1.0, 0.5, 0.25};
  s.yerr = {0.05, 0.02, 0.01};
  s.fitted_line = true;
  s.slope = 1.0;
  s.intercept = std::log(2.0);
  const std::string path = tmp_dir() + "/plot.svg";
  write_loglog_svg(path, "test", "eta", "value", {s});
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("slope") != std::string::npos);
}

TEST_CASE("table emission stamps the reproducibility manifest") {
  ResultTable t;
  t.columns = {"v"};
  t.start_row();
  t.cell(1.5);
  Config cfg = Config::parse("eta = 0.25\n");
  HarnessOptions opts;
  opts.out_dir = tmp_dir() + "/emit";
  opts.seed = 77;
  emit_table(t, cfg, opts, "unit");
  ResultTable r = read_csv(opts.out_dir + "/unit.csv");
  bool hash = false, seed = false;
  for (const auto& [k, v] : r.manifest) {
    hash = hash || (k == "config_hash" && v == cfg.hash_hex());
    seed = seed || (k == "master_seed" && v == "77");
  }
  CHECK(hash);
  CHECK(seed);
}
