#include "wavekin/kinetic.hpp"

#include <cmath>
#include <stdexcept>

#include "wavekin/grid.hpp"

namespace wavekin {

namespace {

// Trapezoid accumulation of g over nodes 0..j of a uniform grid with step dt.
template <typename G>
auto trapz_prefix(int j, double dt, const G& g) {
  using V = decltype(g(0));
  if (j == 0) return V(0.0) * g(0);
  V s = 0.5 * (g(0) + g(j));
  for (int i = 1; i < j; ++i) s += g(i);
  return s * dt;
}

double factorial_bound(double rlinf, double t, int order) {
  double b = 1.0;
  for (int n = 1; n <= order; ++n) b *= rlinf * t / n;
  return b;
}

}  // namespace

double ParticleEnsemble::total_weight() const {
  double s = 0.0;
  for (const auto& p : parts) s += p.weight;
  return s;
}

double GaussianProfile::eval(const Eigen::VectorXd& k) const {
  return amp * std::exp(-(k - center).squaredNorm() / (2.0 * width * width));
}

double GaussianProfile::mass() const {
  return amp * std::pow(kTwoPi * width * width, 0.5 * center.size());
}

ParticleEnsemble sample_gaussian_delta_source(const GaussianProfile& f, int n_particles,
                                              RngStream& rng) {
  if (n_particles < 1) throw std::invalid_argument("sample_gaussian_delta_source: need particles");
  const int d = static_cast<int>(f.center.size());
  ParticleEnsemble ens;
  ens.dim = d;
  ens.parts.resize(n_particles);
  const double w = f.mass() / n_particles;
  for (auto& p : ens.parts) {
    p.x = Eigen::VectorXd::Zero(d);
    p.k.resize(d);
    for (int i = 0; i < d; ++i) p.k[i] = f.center[i] + f.width * rng.gaussian();
    p.weight = w;
  }
  return ens;
}

ParticleEnsemble ballistic(const ParticleEnsemble& a0, double t, double r0) {
  ParticleEnsemble out = a0;
  const double damp = std::exp(-r0 * t);
  for (auto& p : out.parts) {
    p.x += t * p.k;
    p.weight *= damp;
  }
  out.t = a0.t + t;
  return out;
}

Eigen::VectorXd sample_scatter_kernel(const CorrelationModel& model, const Eigen::VectorXd& k,
                                      RngStream& rng) {
  const int d = static_cast<int>(k.size());
  Eigen::VectorXd q(d);
  if (model.kind == CorrelationModel::Kind::gaussian) {
    // Rhat(k - q) is a gaussian in q centered at k with std 1/l per axis.
    for (int i = 0; i < d; ++i) q[i] = k[i] + rng.gaussian() / model.length;
    return q;
  }
  if (d == 1) {
    // density prop. to (1 + l^2 dk^2)^{-1}: a Cauchy deviate.
    double u = rng.uniform();
    q[0] = k[0] + std::tan(kPi * (u - 0.5)) / model.length;
    return q;
  }
  if (d == 2) {
    // radial density prop. to r (1 + l^2 r^2)^{-3/2}: CDF 1 - (1 + l^2 r^2)^{-1/2}.
    double u = rng.uniform();
    double inv = 1.0 / (1.0 - u);
    double r = std::sqrt(inv * inv - 1.0) / model.length;
    double th = kTwoPi * rng.uniform();
    q[0] = k[0] + r * std::cos(th);
    q[1] = k[1] + r * std::sin(th);
    return q;
  }
  throw std::invalid_argument("sample_scatter_kernel: unsupported dimension for matern kind");
}

ParticleEnsemble kinetic_solve_mc(const ParticleEnsemble& a0, const CorrelationModel& model,
                                  double T, RngStream& rng) {
  model.validate();
  ParticleEnsemble out = a0;
  const double r0 = model.r0();
  for (auto& p : out.parts) {
    double t = 0.0;
    while (true) {
      double tau = r0 > 0.0 ? rng.exponential(r0) : 2.0 * (T - t) + 1.0;
      if (t + tau >= T) {
        p.x += (T - t) * p.k;
        break;
      }
      p.x += tau * p.k;
      t += tau;
      p.k = sample_scatter_kernel(model, p.k, rng);
      ++p.n_jumps;
    }
  }
  out.t = a0.t + T;
  return out;
}

McEstimate pair_particles(const ParticleEnsemble& ens,
                          const std::function<double(const Eigen::VectorXd&,
                                                     const Eigen::VectorXd&)>& phi) {
  const long n = static_cast<long>(ens.parts.size());
  if (n == 0) return {};
  double sum = 0.0, sumsq = 0.0;
  for (const auto& p : ens.parts) {
    double v = n * p.weight * phi(p.x, p.k);
    sum += v;
    sumsq += v * v;
  }
  McEstimate est;
  est.value = sum / n;
  if (n > 1) {
    double var = (sumsq - sum * sum / n) / (n - 1.0);
    est.stderr_ = std::sqrt(std::max(var, 0.0) / n);
  }
  return est;
}

std::complex<double> ballistic_fourier(const PhaseSpaceFn& fa0, double t, double r0,
                                       const Eigen::VectorXd& u, const Eigen::VectorXd& k) {
  return std::exp(-r0 * t) * fa0(u, k + t * u);
}

FourierKineticResult kinetic_solve_fourier_point(const PhaseSpaceFn& fa0,
                                                 const CorrelationModel& model, double T,
                                                 int n_terms, int time_nodes,
                                                 const Eigen::VectorXd& u,
                                                 const Eigen::VectorXd& k) {
  model.validate();
  if (n_terms < 0) throw std::invalid_argument("kinetic_solve_fourier_point: n_terms < 0");
  if (time_nodes < 2) throw std::invalid_argument("kinetic_solve_fourier_point: need >= 2 time nodes");
  const int m = time_nodes;
  const double dt = T / (m - 1);
  // R along the backward characteristic depends only on the node difference.
  std::vector<double> rdiff(m);
  for (int i = 0; i < m; ++i) rdiff[i] = correlation_eval(model, k + (i * dt) * u);

  std::vector<double> prev(m, 1.0), cur(m);
  const std::complex<double> base = std::exp(-model.r0() * T) * fa0(u, k + T * u);

  FourierKineticResult res;
  res.terms.resize(n_terms + 1);
  res.terms[0] = base;
  res.value = base;
  double sum_at_t = 1.0;
  for (int n = 1; n <= n_terms; ++n) {
    for (int j = 0; j < m; ++j)
      cur[j] = trapz_prefix(j, dt, [&](int i) { return rdiff[j - i] * prev[i]; });
    std::swap(prev, cur);
    res.terms[n] = base * prev[m - 1];
    res.value += res.terms[n];
    sum_at_t += prev[m - 1];
  }
  (void)sum_at_t;
  // Tail of the exponential series: sum_{m > n} x^m/m! <= x^{n+1}/(n+1)! e^x.
  res.truncation_bound = std::abs(base) * factorial_bound(model.sigma2, T, n_terms + 1) *
                         std::exp(model.sigma2 * T);
  return res;
}

FourierGridFn kinetic_solve_fourier(const std::vector<AxisSpec>& axes, const PhaseSpaceFn& fa0,
                                    const CorrelationModel& model, double T, int n_terms,
                                    int time_nodes) {
  if (axes.size() % 2 != 0) throw std::invalid_argument("kinetic_solve_fourier: need (u, k) axes");
  const int d = static_cast<int>(axes.size()) / 2;
  FourierGridFn g;
  g.axes = axes;
  g.values.resize(g.size());
  Eigen::VectorXd u(d), k(d);
  std::vector<int> idx(axes.size(), 0);
  for (long flat = 0; flat < g.size(); ++flat) {
    long rem = flat;
    for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % axes[a].n);
      rem /= axes[a].n;
    }
    for (int i = 0; i < d; ++i) {
      u[i] = axes[i].coord(idx[i]);
      k[i] = axes[d + i].coord(idx[d + i]);
    }
    g.values[flat] = kinetic_solve_fourier_point(fa0, model, T, n_terms, time_nodes, u, k).value;
  }
  return g;
}

ScatteredNormResult scattered_norm_check(const std::vector<AxisSpec>& axes,
                                         const PhaseSpaceFn& fa0, const CorrelationModel& model,
                                         double t, int n_terms, int time_nodes) {
  if (axes.size() % 2 != 0) throw std::invalid_argument("scattered_norm_check: need (u, k) axes");
  const int d = static_cast<int>(axes.size()) / 2;
  FourierGridFn diff;
  diff.axes = axes;
  diff.values.resize(diff.size());
  Eigen::VectorXd u(d), k(d);
  std::vector<int> idx(axes.size(), 0);
  for (long flat = 0; flat < diff.size(); ++flat) {
    long rem = flat;
    for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % axes[a].n);
      rem /= axes[a].n;
    }
    for (int i = 0; i < d; ++i) {
      u[i] = axes[i].coord(idx[i]);
      k[i] = axes[d + i].coord(idx[d + i]);
    }
    auto full = kinetic_solve_fourier_point(fa0, model, t, n_terms, time_nodes, u, k);
    diff.values[flat] = full.value - full.terms[0];
  }
  ScatteredNormResult res;
  res.lhs = norm_Y(diff);

  // int dxi sup_v |F a0(v, xi)| on the same axes.
  long n_u = 1, n_k = 1;
  for (int i = 0; i < d; ++i) n_u *= axes[i].n;
  for (int i = 0; i < d; ++i) n_k *= axes[d + i].n;
  double cell_k = 1.0;
  for (int i = 0; i < d; ++i) cell_k *= axes[d + i].step;
  double integral = 0.0;
  for (long jk = 0; jk < n_k; ++jk) {
    long rem = jk;
    for (int a = d - 1; a >= 0; --a) {
      k[a] = axes[d + a].coord(static_cast<int>(rem % axes[d + a].n));
      rem /= axes[d + a].n;
    }
    double sup = 0.0;
    for (long ju = 0; ju < n_u; ++ju) {
      long r2 = ju;
      for (int a = d - 1; a >= 0; --a) {
        u[a] = axes[a].coord(static_cast<int>(r2 % axes[a].n));
        r2 /= axes[a].n;
      }
      sup = std::max(sup, std::abs(fa0(u, k)));
    }
    integral += sup * cell_k;
  }
  res.rhs_factor = std::pow(t, 1.0 - d) * integral;
  return res;
}

double eval_J0_kernel(const GaussianProfile& f, const CorrelationModel& model,
                      const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const int d = static_cast<int>(p.size());
  if (d != 2) throw std::invalid_argument("eval_J0_kernel: implemented for d = 2");
  if (q.size() != d) throw std::invalid_argument("eval_J0_kernel: dimension mismatch");
  Eigen::VectorXd diff = p - q;
  const double dist = diff.norm();
  if (dist < 1e-12) throw std::invalid_argument("eval_J0_kernel: p = q (degenerate delta)");
  if (model.sigma2 == 0.0) return 0.0;

  Eigen::VectorXd eperp(2);
  eperp << -diff[1] / dist, diff[0] / dist;

  // The second moment couples source *amplitudes*, not Wigner functions: each
  // pair enters as Fhat(k - u) Fhat(k), the ambiguity function at momentum
  // offset u. For the gaussian profile
  //   Fhat(k - u) Fhat(k) propto f(k - u/2) exp(-|u|^2 / (8 width^2)),
  // so the two pairs contribute f(..) f(..) times a common form factor
  // exp(-|u|^2 / (4 width^2)). Dropping it (i.e. writing the kernel with
  // Wigner functions alone) overstates the coupling at large |u|.
  const double ambiguity_scale = 4.0 * f.width * f.width;

  // Direct pair term, delta(u . (p - q)): the hyperplane u = tau * eperp;
  // the integrand decays through Rhat, f and the form factor.
  const double reach = 6.0 / model.length;
  const double freach = 2.0 * (8.0 * f.width + (p - f.center).norm() + (q - f.center).norm());
  const double tmax = std::max(reach, std::min(freach, 40.0 * std::max(reach, 1.0)));
  const int nq = 1024;
  const double dtau = 2.0 * tmax / nq;
  double direct = 0.0;
  for (int i = 0; i <= nq; ++i) {
    double tau = -tmax + i * dtau;
    Eigen::VectorXd u = tau * eperp;
    double val = spectrum_eval(model, u) * std::exp(-u.squaredNorm() / ambiguity_scale) *
                 f.eval(p - 0.5 * u) * f.eval(q - 0.5 * u);
    direct += (i == 0 || i == nq ? 0.5 : 1.0) * val;
  }
  direct *= dtau / dist;

  // Exchange pair term, delta(u . (p - q) - |u|^2): the collapse manifold is
  // the circle through 0 and p - q (center (p - q) / 2, radius |p - q| / 2).
  // |grad| = |2u - (p - q)| = |p - q| there, and the arc element
  // (|p - q| / 2) dtheta cancels that, leaving no 1 / |p - q| prefactor.
  // The shift is what makes the kernel integrate to zero over (p, q) —
  // substituting q -> q + u maps this term onto the direct one — as required
  // by conservation of the total energy (the total-mass pairing has zero
  // variance pathwise).
  const int nc = 512;
  const double dth = kTwoPi / nc;
  double cross = 0.0;
  for (int i = 0; i < nc; ++i) {
    double th = i * dth;
    Eigen::VectorXd u = 0.5 * (1.0 + std::cos(th)) * diff + 0.5 * dist * std::sin(th) * eperp;
    cross += spectrum_eval(model, u) * std::exp(-u.squaredNorm() / ambiguity_scale) *
             f.eval(p - 0.5 * u) * f.eval(q + 0.5 * u);
  }
  cross *= 0.5 * dth;

  return kTwoPi * std::pow(kTwoPi, -d) * (direct - cross);
}

double eval_J0_source(const GaussianProfile& f, const CorrelationModel& model, double t,
                      const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  return std::exp(-2.0 * model.r0() * t) * eval_J0_kernel(f, model, p, q);
}

DoubledObservable doubled_solve_mc(
    const GaussianProfile& f, const CorrelationModel& model, double T,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& phi_xk,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& phi_yp,
    int n_particles, RngStream& rng, double eps_diag) {
  const int d = static_cast<int>(f.center.size());
  if (d < 2) throw std::invalid_argument("doubled_solve_mc: the limit source is degenerate in d = 1");
  if (d != 2) throw std::invalid_argument("doubled_solve_mc: implemented for d = 2");
  model.validate();

  // Mixture proposal over a (p, q) box covering the support of f. The bulk
  // component is a piecewise-constant table of |H| over (p, q) cells; the
  // strip component covers the near-diagonal region |p - q| < eps_diag,
  // where the hyperplane part of the kernel diverges like 1 / |p - q|, with
  // a density carrying the same divergence so the importance weights stay
  // bounded. The birth weight uses the exact kernel at the sampled point, so
  // the proposal coarseness does not bias the estimator.
  const int nb = 10;
  const double half = 4.5 * f.width;
  const double step = 2.0 * half / nb;
  const double beta_strip = 0.25;  // mixture weight of the strip component
  std::vector<double> table(static_cast<size_t>(nb) * nb * nb * nb);
  Eigen::VectorXd p(2), q(2);
  double total = 0.0;
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b)
      for (int c = 0; c < nb; ++c)
        for (int e = 0; e < nb; ++e) {
          p[0] = f.center[0] - half + (a + 0.5) * step;
          p[1] = f.center[1] - half + (b + 0.5) * step;
          q[0] = f.center[0] - half + (c + 0.5) * step;
          q[1] = f.center[1] - half + (e + 0.5) * step;
          if ((p - q).norm() < eps_diag) {
            // The cell center sits on the strip; probe the off-strip bulk of
            // the cell so the table stays representative there (the strip
            // component owns the near-diagonal divergence).
            p[0] += 0.25 * step;
            q[0] -= 0.25 * step;
          }
          double m = std::abs(eval_J0_kernel(f, model, p, q));
          table[((static_cast<size_t>(a) * nb + b) * nb + c) * nb + e] = m;
          total += m;
        }
  if (total <= 0.0) return {0.0, 0.0, n_particles};
  // Cumulative table for cell sampling.
  std::vector<double> cdf(table.size());
  double acc = 0.0;
  for (size_t i = 0; i < table.size(); ++i) {
    acc += table[i];
    cdf[i] = acc;
  }
  const double cell_vol = std::pow(step, 4);
  const double norm = acc;  // table density = table[i] / (norm * cell_vol) inside cell i
  const double box_area = std::pow(2.0 * half, 2);
  // Strip density in (p, q) at midpoint m = (p + q) / 2 and r = |p - q|:
  // uniform in m over the box, uniform in (r, angle) on (0, eps_diag), so
  // 1 / (box_area * 2 pi eps_diag * r) per unit d p d q.
  auto strip_density = [&](const Eigen::VectorXd& pp, const Eigen::VectorXd& qq) {
    const double r = (pp - qq).norm();
    if (r >= eps_diag) return 0.0;
    for (int i = 0; i < 2; ++i) {
      const double mi = 0.5 * (pp[i] + qq[i]);
      if (std::abs(mi - f.center[i]) > half) return 0.0;
    }
    return 1.0 / (box_area * kTwoPi * eps_diag * std::max(r, 1e-12));
  };
  auto table_density = [&](const Eigen::VectorXd& pp, const Eigen::VectorXd& qq) {
    int idx[4];
    const double coords[4] = {pp[0], pp[1], qq[0], qq[1]};
    for (int i = 0; i < 4; ++i) {
      const double c = f.center[i % 2];
      idx[i] = static_cast<int>(std::floor((coords[i] - (c - half)) / step));
      if (idx[i] < 0 || idx[i] >= nb) return 0.0;
    }
    size_t flat = ((static_cast<size_t>(idx[0]) * nb + idx[1]) * nb + idx[2]) * nb + idx[3];
    return table[flat] / (norm * cell_vol);
  };

  double sum = 0.0, sumsq = 0.0;
  for (int n = 0; n < n_particles; ++n) {
    if (rng.uniform() < beta_strip) {
      for (int i = 0; i < 2; ++i) {
        const double mi = f.center[i] + (2.0 * rng.uniform() - 1.0) * half;
        p[i] = mi;
        q[i] = mi;
      }
      const double r = std::max(eps_diag * rng.uniform(), 1e-9);
      const double th = kTwoPi * rng.uniform();
      p[0] += 0.5 * r * std::cos(th);
      p[1] += 0.5 * r * std::sin(th);
      q[0] -= 0.5 * r * std::cos(th);
      q[1] -= 0.5 * r * std::sin(th);
    } else {
      double target = norm * rng.uniform();
      size_t lo = 0, hi = cdf.size() - 1;
      while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (cdf[mid] < target) lo = mid + 1; else hi = mid;
      }
      size_t ci = lo;
      int e = static_cast<int>(ci % nb); ci /= nb;
      int c = static_cast<int>(ci % nb); ci /= nb;
      int b = static_cast<int>(ci % nb); ci /= nb;
      int a = static_cast<int>(ci);
      p[0] = f.center[0] - half + (a + rng.uniform()) * step;
      p[1] = f.center[1] - half + (b + rng.uniform()) * step;
      q[0] = f.center[0] - half + (c + rng.uniform()) * step;
      q[1] = f.center[1] - half + (e + rng.uniform()) * step;
    }
    const double g =
        (1.0 - beta_strip) * table_density(p, q) + beta_strip * strip_density(p, q);
    const double h = eval_J0_kernel(f, model, p, q);
    const double w = h / g;

    double contrib = 0.0;
    if (w != 0.0) {
      // Independent conservative jump transport of each factor over [0, T];
      // the no-jump paths reproduce the free flow of the initial measure and
      // the jumps realize the gain terms.
      ParticleEnsemble fac;
      fac.dim = 2;
      fac.parts.resize(1);
      fac.parts[0].x = Eigen::VectorXd::Zero(2);
      fac.parts[0].k = p;
      fac.parts[0].weight = 1.0;
      ParticleEnsemble fx = kinetic_solve_mc(fac, model, T, rng);
      fac.parts[0].x = Eigen::VectorXd::Zero(2);
      fac.parts[0].k = q;
      ParticleEnsemble fy = kinetic_solve_mc(fac, model, T, rng);
      contrib = w * phi_xk(fx.parts[0].x, fx.parts[0].k) * phi_yp(fy.parts[0].x, fy.parts[0].k);
    }
    sum += contrib;
    sumsq += contrib * contrib;
  }
  DoubledObservable obs;
  obs.n_particles = n_particles;
  obs.estimate = sum / n_particles;
  if (n_particles > 1) {
    double var = (sumsq - sum * sum / n_particles) / (n_particles - 1.0);
    obs.stderr_ = std::sqrt(std::max(var, 0.0) / n_particles);
  }
  return obs;
}

std::complex<double> doubled_solve_fourier_point(const DoubledSourceFn& fsource,
                                                 const CorrelationModel& model, double T,
                                                 int n_terms, int time_nodes,
                                                 const Eigen::VectorXd& u,
                                                 const Eigen::VectorXd& xi,
                                                 const Eigen::VectorXd& v,
                                                 const Eigen::VectorXd& zeta) {
  model.validate();
  if (time_nodes < 2) throw std::invalid_argument("doubled_solve_fourier_point: need >= 2 time nodes");
  const int m = time_nodes;
  const double dt = T / (m - 1);
  const double r0 = model.r0();

  // Backward characteristics through the target point.
  std::vector<double> rsum(m);
  std::vector<std::complex<double>> src(m);
  for (int i = 0; i < m; ++i) {
    double s = i * dt;
    Eigen::VectorXd xs = xi + (T - s) * u;
    Eigen::VectorXd zs = zeta + (T - s) * v;
    rsum[i] = correlation_eval(model, xs) + correlation_eval(model, zs);
    src[i] = fsource(s, u, xs, v, zs);
  }

  // j^0(s) = int_0^s e^{-2R0(s-r)} F S(r) dr; higher orders fold in Q2.
  std::vector<std::complex<double>> prev(m), cur(m), result(m);
  for (int j = 0; j < m; ++j)
    prev[j] = trapz_prefix(j, dt, [&](int i) {
      return std::exp(-2.0 * r0 * (j - i) * dt) * src[i];
    });
  result = prev;
  for (int n = 1; n <= n_terms; ++n) {
    for (int j = 0; j < m; ++j)
      cur[j] = trapz_prefix(j, dt, [&](int i) {
        return std::exp(-2.0 * r0 * (j - i) * dt) * rsum[i] * prev[i];
      });
    std::swap(prev, cur);
    for (int j = 0; j < m; ++j) result[j] += prev[j];
  }
  return result[m - 1];
}

FourierGridFn doubled_solve_fourier(const std::vector<AxisSpec>& axes,
                                    const DoubledSourceFn& fsource,
                                    const CorrelationModel& model, double T, int n_terms,
                                    int time_nodes) {
  if (axes.size() != 4) throw std::invalid_argument("doubled_solve_fourier: d = 1 only (4 axes)");
  FourierGridFn g;
  g.axes = axes;
  g.values.resize(g.size());
  Eigen::VectorXd u(1), xi(1), v(1), zeta(1);
  for (int a = 0; a < axes[0].n; ++a)
    for (int b = 0; b < axes[1].n; ++b)
      for (int c = 0; c < axes[2].n; ++c)
        for (int e = 0; e < axes[3].n; ++e) {
          u[0] = axes[0].coord(a);
          xi[0] = axes[1].coord(b);
          v[0] = axes[2].coord(c);
          zeta[0] = axes[3].coord(e);
          long flat = ((static_cast<long>(a) * axes[1].n + b) * axes[2].n + c) * axes[3].n + e;
          g.values[flat] =
              doubled_solve_fourier_point(fsource, model, T, n_terms, time_nodes, u, xi, v, zeta);
        }
  return g;
}

}  // namespace wavekin
