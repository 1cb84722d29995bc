#include "growup/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "growup/io.hpp"
#include "growup/specfun.hpp"

namespace growup::pde {

namespace {

double power(double u, double e) {
  if (e == 1.0) return u;
  if (e == 0.5) return std::sqrt(u);
  if (e == 2.0) return u * u;
  return std::pow(u, e);
}

double rN(double r, int N) { return std::pow(r, N); }

}  // namespace

RadialGrid::RadialGrid(int N, std::vector<double> r, bool uniform) : N_(N), r_(std::move(r)), uniform_(uniform) {
  const std::size_t M = r_.size() - 1;
  rf_.resize(M);
  af_.resize(M);
  vol_.resize(M + 1);
  for (std::size_t i = 0; i < M; ++i) {
    rf_[i] = 0.5 * (r_[i] + r_[i + 1]);
    af_[i] = std::pow(rf_[i], N_ - 1);
  }
  vol_[0] = rN(rf_[0], N_) / N_;
  for (std::size_t i = 1; i < M; ++i) vol_[i] = (rN(rf_[i], N_) - rN(rf_[i - 1], N_)) / N_;
  vol_[M] = (rN(r_[M], N_) - rN(rf_[M - 1], N_)) / N_;
}

RadialGrid RadialGrid::uniform(int N, double R_max, int M) {
  if (N < 1 || !(R_max > 0.0) || M < 2) throw std::invalid_argument("RadialGrid: need N >= 1, R_max > 0, M >= 2");
  std::vector<double> r(M + 1);
  for (int i = 0; i <= M; ++i) r[i] = R_max * i / M;
  return RadialGrid(N, std::move(r), true);
}

RadialGrid RadialGrid::stretched(int N, double h, double r_uniform, double growth, double R_max) {
  if (N < 1 || !(h > 0.0) || !(growth >= 1.0) || !(R_max > r_uniform) || r_uniform < 0.0)
    throw std::invalid_argument("RadialGrid: invalid stretched grid");
  std::vector<double> r{0.0};
  double step = h;
  while (r.back() < R_max) {
    if (r.back() >= r_uniform) step *= growth;
    double next = r.back() + step;
    if (next > R_max - 0.5 * step) next = R_max;
    r.push_back(next);
  }
  if (r.size() < 3) throw std::invalid_argument("RadialGrid: too few nodes");
  return RadialGrid(N, std::move(r), growth == 1.0);
}

double RadialGrid::h_min() const {
  double h = INFINITY;
  for (std::size_t i = 0; i + 1 < r_.size(); ++i) h = std::min(h, r_[i + 1] - r_[i]);
  return h;
}

double RadialGrid::ball_fraction(std::size_t i, double L) const {
  const double lo = i == 0 ? 0.0 : rf_[i - 1];
  const double hi = i + 1 < r_.size() ? rf_[i] : r_.back();
  if (L >= hi) return 1.0;
  if (L <= lo) return 0.0;
  return (rN(L, N_) - rN(lo, N_)) / (rN(hi, N_) - rN(lo, N_));
}

double RadialGrid::sphere_area() const {
  return 2.0 * std::pow(std::numbers::pi, N_ / 2.0) / std::tgamma(N_ / 2.0);
}

double RadialGrid::interpolate(const std::vector<double>& u, double r) const {
  if (r <= 0.0) return u.front();
  if (r >= r_.back()) return u.back();
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - r_.begin()) - 1;
  const double t = (r - r_[k]) / (r_[k + 1] - r_[k]);
  return (1 - t) * u[k] + t * u[k + 1];
}

double flat_bound(double M, double p, double t) {
  if (!(t >= 0.0)) throw std::domain_error("flat_bound: need t >= 0");
  if (p == 1.0) return M * std::exp(t);
  if (p < 1.0) return std::pow(std::pow(M, 1.0 - p) + (1.0 - p) * t, 1.0 / (1.0 - p));
  const double base = std::pow(M, 1.0 - p) - (p - 1.0) * t;
  return base > 0.0 ? std::pow(base, 1.0 / (1.0 - p)) : INFINITY;
}

namespace {

std::vector<double> reaction_weights(const ProblemParams& params, const RadialGrid& grid, Reaction reaction) {
  std::vector<double> a(grid.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (reaction == Reaction::everywhere) a[i] = 1.0;
    if (reaction == Reaction::localized) a[i] = grid.ball_fraction(i, params.L);
  }
  return a;
}

// Fills du for nodes 0..last from u and w = u^m.
void rhs_into(const std::vector<double>& u, const std::vector<double>& w, const std::vector<double>& a, double p,
              const RadialGrid& grid, std::size_t last, std::vector<double>& du) {
  const auto& r = grid.r();
  const std::size_t M = grid.size() - 1;
  double F_prev = 0.0;
  for (std::size_t i = 0; i <= last; ++i) {
    const double F = i < M ? grid.face_area(i) * (w[i + 1] - w[i]) / (r[i + 1] - r[i]) : 0.0;
    du[i] = (F - F_prev) / grid.volume(i);
    if (a[i] > 0.0) du[i] += a[i] * power(u[i], p);
    F_prev = F;
  }
}

std::size_t last_unknown(const RadialGrid& grid, Boundary b) {
  return b == Boundary::zero_flux ? grid.size() - 1 : grid.size() - 2;
}

double boundary_value(Boundary b, Reaction reaction, double sup0, double p, double t) {
  if (b != Boundary::flat_bound) return 0.0;
  return reaction == Reaction::none ? sup0 : flat_bound(sup0, p, t);
}

std::vector<double> output_times(const SimulationConfig& c) {
  std::vector<double> out{0.0};
  if (c.t_first_output < c.t_max && c.outputs_per_decade > 0) {
    for (int k = 0;; ++k) {
      const double t = c.t_first_output * std::pow(10.0, static_cast<double>(k) / c.outputs_per_decade);
      if (t >= c.t_max * (1 - 1e-12)) break;
      out.push_back(t);
    }
  }
  out.push_back(c.t_max);
  return out;
}

double sup_norm(const std::vector<double>& u) { return *std::max_element(u.begin(), u.end()); }

// Blow-up time from the last growth rates g = d log sup/dt, assuming
// sup ~ (T - t)^{-k}, so that 1/g is linear in t and vanishes at T.
std::optional<double> blowup_time(const std::vector<SeriesPoint>& s) {
  if (s.size() < 3) return std::nullopt;
  const auto g = [&](std::size_t i) {
    return (std::log(s[i].sup) - std::log(s[i - 1].sup)) / (s[i].t - s[i - 1].t);
  };
  const std::size_t n = s.size() - 1;
  const double g1 = g(n), g0 = g(n - 1);
  if (!(g1 > 0.0 && g0 > 0.0 && g1 > g0)) return s.back().t;
  const double t1 = 0.5 * (s[n].t + s[n - 1].t), t0 = 0.5 * (s[n - 1].t + s[n - 2].t);
  const double slope = (1.0 / g1 - 1.0 / g0) / (t1 - t0);
  return std::max(s.back().t, t1 - (1.0 / g1) / slope);
}

}  // namespace

std::vector<double> discrete_rhs(const std::vector<double>& u, const ProblemParams& params, const RadialGrid& grid,
                                 Reaction reaction, Boundary boundary) {
  if (u.size() != grid.size()) throw std::invalid_argument("discrete_rhs: size mismatch");
  std::vector<double> w(u.size()), du(u.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) w[i] = power(u[i], params.m);
  rhs_into(u, w, reaction_weights(params, grid, reaction), params.p, grid, last_unknown(grid, boundary), du);
  return du;
}

SimulationRun simulate(const ProblemParams& params, const InitialData& u0, const RadialGrid& grid,
                       const SimulationConfig& config) {
  params.validate();
  if (grid.N() != params.N) throw std::invalid_argument("simulate: grid dimension differs from N");
  if (config.reaction == Reaction::localized && !(grid.R_max() > 2.0 * params.L))
    throw std::invalid_argument("simulate: need R_max > 2L");
  if (!(config.t_max > 0.0)) throw InvalidParams("simulate: t_max must be positive");

  SimulationRun run{params, grid, config, {}, {}, {}, 0.0, 0, false, false, std::nullopt, false, true,
                    Outcome::inconclusive};
  const std::size_t n = grid.size();
  const auto& r = grid.r();
  std::vector<double> u(n), w(n), du(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = u0(r[i]);
    if (!std::isfinite(u[i]) || u[i] < 0.0) throw InvalidParams("simulate: initial data must be finite and >= 0");
    if (params.p < 1.0 && r[i] <= params.L && u[i] <= 0.0) run.non_unique_regime = true;
  }
  run.sup0 = sup_norm(u);
  const std::size_t last = last_unknown(grid, config.boundary);
  if (last + 1 < n) u[n - 1] = boundary_value(config.boundary, config.reaction, run.sup0, params.p, 0.0);

  const std::vector<double> a = reaction_weights(params, grid, config.reaction);
  // Diffusive rate of node i per unit diffusivity.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i <= last; ++i) {
    double s = 0.0;
    if (i + 1 < n) s += grid.face_area(i) / (r[i + 1] - r[i]);
    if (i > 0) s += grid.face_area(i - 1) / (r[i] - r[i - 1]);
    coef[i] = s / grid.volume(i);
  }
  const double m = params.m, p = params.p;
  std::vector<double> cond(n, 0.0), inv_vol(n);
  for (std::size_t i = 0; i + 1 < n; ++i) cond[i] = grid.face_area(i) / (r[i + 1] - r[i]);
  for (std::size_t i = 0; i < n; ++i) inv_vol[i] = 1.0 / grid.volume(i);
  std::vector<std::size_t> reacting;
  for (std::size_t i = 0; i <= last; ++i)
    if (a[i] > 0.0) reacting.push_back(i);
  const double linear_rate = *std::max_element(coef.begin(), coef.end());
  run.traces.assign(config.trace_radii.size(), {});

  double last_recorded_sup = 0.0;
  const auto record = [&](double t, double dt_used) {
    const double s = sup_norm(u);
    if (!run.sup_series.empty() && s < run.sup_series.back().sup * (1 - 1e-12)) run.monotone = false;
    run.sup_series.push_back({t, s});
    for (std::size_t j = 0; j < config.trace_radii.size(); ++j)
      run.traces[j].push_back(grid.interpolate(u, config.trace_radii[j]));
    if (config.keep_snapshots) run.snapshots.push_back({t, u, dt_used});
    last_recorded_sup = s;
  };

  const std::vector<double> outs = output_times(config);
  std::size_t next_out = 1;
  // Compensated time: near blow-up dt drops below the spacing of doubles at t.
  double t = 0.0, t_carry = 0.0, dt_used = 0.0;
  record(0.0, 0.0);
  while (next_out < outs.size()) {
    if (run.steps >= config.max_steps) {
      record(t, dt_used);
      run.step_collapse = true;
      break;
    }
    if (m != 1.0)
      for (std::size_t i = 0; i < n; ++i) w[i] = power(u[i], m);
    const std::vector<double>& wv = m == 1.0 ? u : w;
    // Largest stable step: keeps every update monotone in its own node.
    double rate = m == 1.0 ? linear_rate : 0.0, dt_react = INFINITY;
    for (std::size_t i = 0; m != 1.0 && i <= last; ++i) {
      double d;
      if (u[i] > 0.0)
        d = m * w[i] / u[i];
      else if (m > 1.0)
        d = 0.0;
      else {
        d = 0.0;
        for (std::size_t j : {i - 1, i + 1})
          if (j < n && u[j] > 0.0) d = std::max(d, w[j] / u[j]);
      }
      rate = std::max(rate, d * coef[i]);
    }
    for (std::size_t i : reacting)
      if (u[i] > 0.0 && p != 0.0) dt_react = std::min(dt_react, power(u[i], 1.0 - p) / a[i]);
    double dt = std::min({config.cfl / rate, config.reaction_cfl * dt_react, config.dt_max});
    if (!(dt >= config.dt_min * std::max(1.0, t))) {
      record(t, dt_used);
      run.step_collapse = true;
      break;
    }
    bool at_output = false;
    if (t + dt >= outs[next_out] * (1 - 1e-14)) {
      dt = outs[next_out] - t;
      at_output = true;
    }
    {
      double F_prev = 0.0;
      for (std::size_t i = 0; i <= last; ++i) {
        const double F = cond[i] * (wv[i + 1 < n ? i + 1 : i] - wv[i]);
        du[i] = (F - F_prev) * inv_vol[i];
        F_prev = F;
      }
      for (std::size_t i : reacting) du[i] += a[i] * power(u[i], p);
    }
    for (std::size_t i = 0; i <= last; ++i) u[i] = std::max(0.0, u[i] + dt * du[i]);
    if (at_output) {
      t = outs[next_out];
      t_carry = 0.0;
    } else {
      const double y = dt - t_carry;
      const double sum = t + y;
      t_carry = (sum - t) - y;
      t = sum;
    }
    dt_used = dt;
    ++run.steps;
    if (last + 1 < n) u[n - 1] = boundary_value(config.boundary, config.reaction, run.sup0, p, t);

    const double s = sup_norm(u);
    if (!std::isfinite(s)) {
      run.step_collapse = true;
      break;
    }
    if (s >= config.policy.blowup_threshold) {
      record(t, dt_used);
      run.threshold_crossed = true;
      run.T_estimate = blowup_time(run.sup_series);
      break;
    }
    if (at_output) {
      record(t, dt_used);
      ++next_out;
    } else if (s >= config.growth_trigger * last_recorded_sup && last_recorded_sup > 0.0) {
      record(t, dt_used);
    }
  }
  run.outcome = classify_outcome(run, config.policy);
  return run;
}

double mass(const std::vector<double>& u, const RadialGrid& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += grid.volume(i) * u[i];
  return grid.sphere_area() * s;
}

double lyapunov_energy(const std::vector<double>& u, const ProblemParams& params, const RadialGrid& grid,
                       Reaction reaction) {
  const auto& r = grid.r();
  const std::vector<double> a = reaction_weights(params, grid, reaction);
  double grad = 0.0, react = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double dr = r[i + 1] - r[i];
    const double g = (power(u[i + 1], params.m) - power(u[i], params.m)) / dr;
    grad += grid.face_area(i) * dr * g * g;
  }
  for (std::size_t i = 0; i < u.size(); ++i)
    if (a[i] > 0.0) react += grid.volume(i) * a[i] * std::pow(u[i], params.m + params.p);
  return grid.sphere_area() * (0.5 * grad - params.m / (params.m + params.p) * react);
}

MassReport mass_functional(const SimulationRun& run) {
  const double m = run.params.m;
  MassReport rep{};
  rep.exponent = 2.0 * m / (m + 1.0);
  for (const auto& s : run.snapshots) {
    double J = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) J += run.grid.volume(i) * std::pow(s.u[i], m + 1.0);
    rep.t.push_back(s.t);
    rep.J.push_back(run.grid.sphere_area() * J / (m + 1.0));
  }
  const std::size_t n = rep.t.size();
  rep.dJ.assign(n, NAN);
  for (std::size_t k = 1; k + 1 < n; ++k)
    if (rep.t[k + 1] > rep.t[k - 1]) rep.dJ[k] = (rep.J[k + 1] - rep.J[k - 1]) / (rep.t[k + 1] - rep.t[k - 1]);
  std::size_t k0 = n;
  for (std::size_t k = n > 1 ? n - 1 : 0; k-- > 1;) {
    if (!(rep.dJ[k] > 1e-12 * std::max(rep.J[k], 1e-300))) break;
    k0 = k;
  }
  if (k0 >= n) {
    rep.C = 0.0;
    rep.conclusion = "no conclusion: J' not eventually positive";
    return rep;
  }
  rep.t0 = rep.t[k0];
  const double q = rep.exponent;
  double C = INFINITY, log_sum = 0.0;
  int count = 0;
  for (std::size_t k = k0; k + 1 < n; ++k) {
    const double ratio = rep.dJ[k] / std::pow(rep.J[k], q);
    C = std::min(C, ratio);
    log_sum += std::log(ratio);
    ++count;
  }
  rep.C = C;
  rep.C_fit = std::exp(log_sum / count);
  if (q > 1.0) {
    const double reach = std::pow(rep.J[k0], 1.0 - q) / (q - 1.0);
    rep.T_bound = *rep.t0 + reach / *rep.C;
    rep.T_predicted = *rep.t0 + reach / *rep.C_fit;
    rep.conclusion = "finite-time blow-up predicted";
  } else if (q < 1.0) {
    rep.conclusion = "power growth J >= c t^{(m+1)/(1-m)}";
  } else {
    rep.conclusion = "exponential growth of J";
  }
  return rep;
}

std::pair<double, std::function<double(double)>> dirichlet_eigenpair(double L, int N) {
  if (!(L > 0.0) || N < 1) throw std::domain_error("dirichlet_eigenpair: need L > 0, N >= 1");
  if (N == 1) {
    const double k = std::numbers::pi / (2.0 * L);
    const double norm = 4.0 * L / std::numbers::pi;
    return {k * k, [k, norm](double r) { return std::cos(k * r) / norm; }};
  }
  const specfun::BesselOrder o = specfun::BesselOrder::for_dimension(N);
  const double nu = o.value();
  const double eta = specfun::bessel_j_zero(o, 1);
  const double k = eta / L;
  const double area = 2.0 * std::pow(std::numbers::pi, N / 2.0) / std::tgamma(N / 2.0);
  const double norm = area * std::pow(L, nu + 1.0) * specfun::bessel_j(specfun::BesselOrder(nu + 1.0), eta) / k;
  const double phi0 = std::pow(k / 2.0, nu) / std::tgamma(nu + 1.0);
  return {k * k, [=](double r) {
            if (r >= L) return 0.0;
            const double x = k * r;
            const double v = x < 1e-8 ? phi0 : std::pow(r, -nu) * specfun::bessel_j(o, x);
            return v / norm;
          }};
}

KaplanReport kaplan_functional(const SimulationRun& run, double L) {
  const auto [lambda1, phi] = dirichlet_eigenpair(L, run.grid.N());
  KaplanReport rep{lambda1, {}, {}, NAN, false};
  std::vector<double> weight(run.grid.size());
  for (std::size_t i = 0; i < weight.size(); ++i)
    weight[i] = run.grid.sphere_area() * run.grid.volume(i) * run.grid.ball_fraction(i, L) * phi(run.grid.r()[i]);
  for (const auto& s : run.snapshots) {
    double J = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) J += weight[i] * s.u[i];
    rep.t.push_back(s.t);
    rep.J.push_back(J);
  }
  const double p = run.params.p, m = run.params.m;
  if (p > m) {
    rep.threshold = std::pow(lambda1, 1.0 / (p - m));
    rep.above_threshold = !rep.J.empty() && rep.J.front() > rep.threshold;
  }
  return rep;
}

namespace {

// Least-squares slope of y against x over the points with t in [a, b].
std::optional<double> slope_between(const std::vector<SeriesPoint>& s, double a, double b,
                                    double (*fx)(double), double (*fy)(double)) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& q : s) {
    if (q.t < a || q.t > b || !(q.sup > 0.0)) continue;
    const double x = fx(q.t), y = fy(q.sup);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) return std::nullopt;
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

double id(double x) { return x; }
double lg(double x) { return std::log(x); }
double lglg(double x) { return std::log(std::log(x)); }

}  // namespace

Outcome classify_outcome(const SimulationRun& run, const Policy& policy) {
  const auto& s = run.sup_series;
  if (s.size() < 2) return Outcome::inconclusive;
  if (run.threshold_crossed || s.back().sup >= policy.blowup_threshold) {
    // Accelerating: the log-growth rate at the end far exceeds the average.
    const std::size_t n = s.size() - 1;
    const double g_end = (std::log(s[n].sup) - std::log(s[n - 1].sup)) / (s[n].t - s[n - 1].t);
    const double t_half = 0.5 * s[n].t;
    std::size_t k = 0;
    while (k + 1 < n && s[k + 1].t <= t_half) ++k;
    const double g_mid = (std::log(s[n].sup) - std::log(s[k].sup)) / (s[n].t - s[k].t);
    return g_end > 3.0 * g_mid ? Outcome::blow_up : Outcome::grow_up;
  }
  if (run.step_collapse) return Outcome::inconclusive;
  const double t_end = s.back().t;
  const double t_dec = t_end / 10.0;
  double lo = INFINITY, hi = 0.0;
  int count = 0;
  for (const auto& q : s)
    if (q.t >= t_dec) {
      lo = std::min(lo, q.sup);
      hi = std::max(hi, q.sup);
      ++count;
    }
  if (count < 2) return Outcome::inconclusive;
  if ((hi - lo) < policy.plateau_tolerance * hi) return Outcome::bounded;
  // Decaying solutions are bounded as well.
  bool nonincreasing = true;
  double prev = INFINITY;
  for (const auto& q : s)
    if (q.t >= t_dec) {
      if (q.sup > prev * (1 + 1e-12)) nonincreasing = false;
      prev = q.sup;
    }
  if (nonincreasing) return Outcome::bounded;
  if (!(s.back().sup > lo * (1.0 + policy.plateau_tolerance))) return Outcome::inconclusive;
  // Grow-up: some rate model has a stable parameter over the last decade.
  const double t_mid = std::sqrt(t_dec * t_end);
  const auto stable = [&](double (*fx)(double), double (*fy)(double), double t_min) {
    if (t_dec <= t_min) return false;
    const auto a = slope_between(s, t_dec, t_mid, fx, fy);
    const auto b = slope_between(s, t_mid, t_end, fx, fy);
    return a && b && *b > 0.0 && std::abs(*a - *b) <= 0.25 * *b;
  };
  if (stable(lg, lg, 0.0) || stable(id, lg, 0.0) || stable(lglg, lg, 1.0)) return Outcome::grow_up;
  return Outcome::inconclusive;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::bounded: return "bounded";
    case Outcome::grow_up: return "grow-up";
    case Outcome::blow_up: return "blow-up";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::dirichlet_zero: return "dirichlet-zero";
    case Boundary::flat_bound: return "flat-bound";
    case Boundary::zero_flux: return "zero-flux";
  }
  return "?";
}

std::string to_string(Reaction r) {
  switch (r) {
    case Reaction::localized: return "localized";
    case Reaction::none: return "none";
    case Reaction::everywhere: return "everywhere";
  }
  return "?";
}

std::string series_csv(const SimulationRun& run) {
  std::vector<std::string> header{"t", "sup_norm"};
  for (double r : run.config.trace_radii) header.push_back("u_r=" + io::format_double(r));
  io::Csv csv(header);
  for (std::size_t k = 0; k < run.sup_series.size(); ++k) {
    std::vector<io::Cell> row{run.sup_series[k].t, run.sup_series[k].sup};
    for (const auto& tr : run.traces) row.emplace_back(tr[k]);
    csv.row(row);
  }
  return csv.str();
}

std::string snapshots_csv(const SimulationRun& run) {
  io::Csv csv({"t", "r", "u"});
  for (const auto& s : run.snapshots)
    for (std::size_t i = 0; i < s.u.size(); ++i) csv.row({s.t, run.grid.r()[i], s.u[i]});
  return csv.str();
}

}  // namespace growup::pde
