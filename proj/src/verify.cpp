#include "growup/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

#include "growup/eigen.hpp"
#include "growup/pde.hpp"
#include "growup/rates.hpp"
#include "growup/selfsim.hpp"
#include "growup/specfun.hpp"
#include "growup/stationary.hpp"

namespace growup::verify {
namespace {

constexpr double kPi = std::numbers::pi;

Check relative(std::string name, double value, double target, double tol) {
  const double err = std::abs(value - target) / std::abs(target);
  return {std::move(name), value, target, tol, false, err <= tol};
}

Check absolute(std::string name, double value, double target, double tol) {
  return {std::move(name), value, target, tol, true, std::abs(value - target) <= tol};
}

Check holds(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, true, ok}; }

/// Largest ratio of the sup norm to the flat bound along a run.
Check flat_bound_check(const std::string& label, const pde::SimulationRun& run) {
  double worst = 0.0;
  for (const auto& s : run.sup_series) {
    const double bound = pde::flat_bound(run.sup0, run.params.p, s.t);
    if (std::isfinite(bound) && bound > 0.0) worst = std::max(worst, s.sup / bound);
  }
  return {"flat bound: " + label, worst, 1.0, 1e-9, false, worst <= 1.0 + 1e-9};
}

rates::Series trace(const pde::SimulationRun& run, std::size_t j) {
  rates::Series s;
  for (std::size_t k = 0; k < run.sup_series.size(); ++k) s.emplace_back(run.sup_series[k].t, run.traces[j][k]);
  return s;
}

pde::SimulationConfig config(double t_max, std::vector<double> traces = {}) {
  pde::SimulationConfig c;
  c.t_max = t_max;
  c.trace_radii = std::move(traces);
  c.keep_snapshots = false;
  return c;
}

RecipeResult critical_length_recipe() {
  RecipeResult r{"Lstar", 1, "p = m = 1: the critical length L*(3) is pi/2 and agrees with the zero of F", {}};
  r.checks.push_back(absolute("L*(3) - pi/2", stationary::critical_length(3), kPi / 2, 1e-8));
  for (int N : {3, 4, 5, 6}) {
    const auto F = stationary::compute_F(stationary::shoot_inner(1.0, N));
    const double rs = F.r_star ? *F.r_star : NAN;
    r.checks.push_back(absolute("L*(" + std::to_string(N) + ") vs zero of F", stationary::critical_length(N), rs, 1e-8));
  }
  return r;
}

RecipeResult stationary_recipe() {
  RecipeResult r{"stationary-explicit", 2, "N = 3, gamma = 1, L = 1: w = sin r / r inside, cos 1 + (sin 1 - cos 1)/r outside", {}};
  const stationary::StationaryProfile w = stationary::build_stationary({1, 1, 3, 1}, 1.0);
  double worst = 0.0;
  for (int i = 1; i <= 2000; ++i) {
    const double x = 10.0 * i / 2000;
    const double ref = x < 1 ? std::sin(x) / x : std::cos(1.0) + (std::sin(1.0) - std::cos(1.0)) / x;
    worst = std::max(worst, std::abs(w.eval(x).first / ref - 1));
  }
  r.checks.push_back(absolute("max relative deviation on (0, 10]", worst, 0.0, 1e-8));
  return r;
}

RecipeResult eigen_recipe() {
  RecipeResult r{"eigen-rate", 3, "exponential solutions: Phi(lambda0, L) = 0, lambda0 increasing in L, 1 - lambda0 ~ L^-2", {}};
  for (int N : {2, 3}) {
    double prev = -INFINITY;
    for (double L : {2.0, 5.0, 20.0}) {
      const double lam = eigen::lambda0(L, N);
      r.checks.push_back(absolute("|Phi| N=" + std::to_string(N) + " L=" + std::to_string(static_cast<int>(L)),
                                  eigen::phi_capital(lam, L, N).value, 0.0, 1e-10));
      r.checks.push_back(holds("lambda0 increasing N=" + std::to_string(N), lam > prev));
      prev = lam;
    }
    rates::Series s;
    for (int k = 0; k <= 12; ++k) {
      const double L = 10.0 * std::pow(100.0, k / 12.0);
      s.emplace_back(L, 1.0 - eigen::lambda0(L, N));
    }
    r.checks.push_back(absolute("slope of 1 - lambda0 vs L, N=" + std::to_string(N),
                                rates::fit_power(s, rates::Window{10, 1000}).parameter, -2.0, 0.05));
  }
  return r;
}

RecipeResult selfsim_recipe() {
  RecipeResult r{"selfsim-asymptotics", 4,
                 "pure diffusion self-similar profiles: f ~ xi^{-(N-2)/m} at 0, xi^{-2/(1-m)} at infinity, "
                 "log correction when delta = 0",
                 {}};
  for (double m : {0.6, 0.8}) {
    for (int N : {2, 3}) {
      for (auto type : {selfsim::SolutionType::I, selfsim::SolutionType::II}) {
        const double alpha = type == selfsim::SolutionType::I ? 2 / (1 - m) : 1.0;
        const selfsim::SimilarityExponents e{alpha, selfsim::beta_for(type, alpha, m), m, N};
        const selfsim::SelfSimilarProfile f = selfsim::reconstruct_profile(selfsim::separatrix(e), 1.0);
        const std::string tag = std::string(type == selfsim::SolutionType::I ? "I" : "II") +
                                " m=" + std::to_string(m).substr(0, 3) + " N=" + std::to_string(N);
        if (N > 2)
          r.checks.push_back(relative("near exponent " + tag, f.near_exponent, -(N - 2) / m, 0.02));
        else
          r.checks.push_back(absolute("near exponent " + tag, f.near_exponent, 0.0, 0.02));
        if (type == selfsim::SolutionType::I)
          r.checks.push_back(relative("far exponent " + tag, f.far_exponent, -2 / (1 - m), 0.02));
        else
          r.checks.push_back(absolute("log-ratio variation " + tag, f.log_ratio_variation.value_or(INFINITY), 0.0, 0.10));
      }
    }
  }
  return r;
}

RecipeResult dichotomy_recipe() {
  RecipeResult r{"dichotomy", 5,
                 "p = m, N = 3: bounded for L < pi/2 under a stationary supersolution, grow-up for L > pi/2, "
                 "blow-up for m > 1",
                 {}};
  {
    const ProblemParams pr{1, 1, 3, 1.2};
    const stationary::StationaryProfile w = stationary::build_stationary(pr, 1.0);
    const pde::SimulationRun run =
        pde::simulate(pr, [&](double x) { return 0.5 * w.eval(x).first; }, pde::RadialGrid::uniform(3, 12, 240), config(1000));
    r.checks.push_back(holds("L=1.2 bounded", run.outcome == pde::Outcome::bounded));
    double worst = 0;
    for (const auto& s : run.sup_series) worst = std::max(worst, s.sup);
    r.checks.push_back({"L=1.2 below the supersolution", worst, w.eval(0).first, 0.0, true, worst <= w.eval(0).first});
    r.checks.push_back(flat_bound_check("L=1.2", run));
  }
  {
    const ProblemParams pr{1, 1, 3, 2};
    const pde::SimulationRun run = pde::simulate(pr, [](double x) { return std::exp(-x * x / 4); },
                                                 pde::RadialGrid::uniform(3, 30, 600), config(100));
    r.checks.push_back(holds("L=2 grow-up", run.outcome == pde::Outcome::grow_up));
    r.checks.push_back(flat_bound_check("L=2", run));
  }
  {
    const ProblemParams pr{2, 2, 3, 2};
    pde::SimulationConfig c = config(100);
    c.keep_snapshots = true;
    c.outputs_per_decade = 10;
    const pde::SimulationRun run =
        pde::simulate(pr, [](double x) { return x < 2 ? 3.0 : 0.0; }, pde::RadialGrid::uniform(3, 10, 100), c);
    r.checks.push_back(holds("m=p=2 L=2 blow-up", run.outcome == pde::Outcome::blow_up));
    const pde::MassReport rep = pde::mass_functional(run);
    const bool both = run.T_estimate && rep.T_predicted;
    const double ratio = both ? *run.T_estimate / *rep.T_predicted : NAN;
    r.checks.push_back({"blow-up time / concavity prediction", ratio, 1.0, 2.0, false, both && ratio >= 0.5 && ratio <= 2.0});
    r.checks.push_back(flat_bound_check("m=p=2", run));
  }
  return r;
}

RecipeResult rate_pm_recipe() {
  RecipeResult r{"rate-pm", 6, "p = m < 1: u(x, t) ~ t^{1/(1-m)} everywhere", {}};
  const ProblemParams pr{0.5, 0.5, 3, 2};
  const pde::SimulationRun run = pde::simulate(pr, [](double x) { return std::pow(1 - x * x / 100, 2); },
                                               pde::RadialGrid::uniform(3, 10, 100), config(1e4, {0, 1, 4}));
  const char* names[] = {"r=0", "r=1", "r=4"};
  for (std::size_t j = 0; j < 3; ++j)
    r.checks.push_back(relative(std::string("power at ") + names[j],
                                rates::fit_power(trace(run, j), rates::Window{1e2, 1e4}).parameter, 2.0, 0.05));
  r.checks.push_back(flat_bound_check("m=p=0.5", run));
  return r;
}

RecipeResult rate_logpower_recipe() {
  RecipeResult r{"rate-logpower", 7, "m = 1, p < 1, N = 2: u(x, t) ~ (log t)^{1/(1-p)}", {}};
  const ProblemParams pr{1, 0.5, 2, 1};
  const pde::SimulationRun run = pde::simulate(pr, [](double x) { return std::exp(-x * x); },
                                               pde::RadialGrid::stretched(2, 0.5, 2.0, 1.05, 3000), config(1e6, {0}));
  const rates::Series s = trace(run, 0);
  const rates::RateFit lp = rates::fit_logpower(s, rates::Window{1e3, 1e6});
  const rates::RateFit pw = rates::fit_power(s, rates::Window{1e3, 1e6});
  r.checks.push_back(relative("log-power exponent at r=0", lp.parameter, 2.0, 0.15));
  r.checks.push_back({"log-power goodness below power goodness", lp.goodness, pw.goodness, 0.0, true,
                      lp.goodness < pw.goodness});
  r.checks.push_back(flat_bound_check("m=1 p=0.5", run));
  return r;
}

RecipeResult rate_lambda0_recipe() {
  RecipeResult r{"rate-lambda0", 8, "m = p = 1: log u(x, t) / t -> lambda0(L)", {}};
  const ProblemParams pr{1, 1, 2, 2};
  const pde::SimulationRun run = pde::simulate(pr, [](double x) { return std::exp(-x * x / 4); },
                                               pde::RadialGrid::uniform(2, 30, 300), config(50, {0}));
  r.checks.push_back(relative("exponential rate at r=0",
                              rates::fit_exponential(trace(run, 0), rates::Window{10, 50}).parameter,
                              eigen::lambda0(2, 2), 0.05));
  r.checks.push_back(flat_bound_check("m=p=1 N=2", run));
  return r;
}

RecipeResult rate_outside_recipe() {
  RecipeResult r{"rate-outside", 9, "m < 1 = p: e^t inside the ball, t^{1/(1-m)} outside", {}};
  const ProblemParams pr{0.8, 1, 2, 1};
  pde::SimulationConfig c = config(600, {0, 3});
  c.policy.blowup_threshold = 1e300;
  // Tail r^{-2/(1-m)} (log r)^{1/(1-m)}.
  const auto u0 = [](double x) {
    const double q = std::exp(1.0) + x * x;
    return 1e5 * std::pow(q, -5) * std::pow(0.5 * std::log(q), 5);
  };
  const pde::SimulationRun run = pde::simulate(pr, u0, pde::RadialGrid::uniform(2, 10, 400), c);
  const rates::Window w{60, 600};
  r.checks.push_back(relative("power at r=3", rates::fit_power(trace(run, 1), w).parameter, 5.0, 0.10));
  const rates::RateFit e = rates::fit_exponential(trace(run, 0), w);
  r.checks.push_back(relative("exponential rate at r=0", e.parameter, 1.0, 0.05));
  r.checks.push_back({"r=0: exponential goodness below power goodness", e.goodness,
                      rates::fit_power(trace(run, 0), w).goodness, 0.0, true,
                      e.goodness < rates::fit_power(trace(run, 0), w).goodness});
  r.checks.push_back(flat_bound_check("m=0.8 p=1", run));
  return r;
}

RecipeResult properties_recipe() {
  RecipeResult r{"properties", 10,
                 "flat bound, comparison, Lyapunov decay, mass conservation, Bessel identities", {}};
  struct P {
    double m, p;
    int N;
  };
  for (const P& q : {P{1, 1, 3}, P{0.5, 0.5, 3}, P{2, 1, 2}, P{1, 0.5, 2}, P{0.8, 1, 1}}) {
    for (pde::Boundary b : {pde::Boundary::dirichlet_zero, pde::Boundary::flat_bound}) {
      pde::SimulationConfig c = config(4);
      c.boundary = b;
      const pde::SimulationRun run = pde::simulate({q.m, q.p, q.N, 1.5}, [](double x) { return 1.0 + std::cos(x); },
                                                   pde::RadialGrid::uniform(q.N, 6, 60), c);
      r.checks.push_back(flat_bound_check("m=" + std::to_string(q.m).substr(0, 3) + " p=" +
                                              std::to_string(q.p).substr(0, 3) + " N=" + std::to_string(q.N) + " " +
                                              pde::to_string(b),
                                          run));
    }
  }

  struct Pair {
    ProblemParams pr;
    double lo, hi;
  };
  const Pair pairs[] = {{{1, 1, 3, 2}, 0.5, 1.0}, {{0.5, 0.5, 3, 2}, 0.8, 1.0}, {{2, 2, 3, 2}, 0.3, 0.6},
                        {{1, 0.5, 2, 1}, 0.2, 2.0}, {{0.8, 1, 2, 1}, 1.0, 1.5}};
  int k = 0;
  for (const Pair& q : pairs) {
    pde::SimulationConfig c = config(2);
    c.keep_snapshots = true;
    c.dt_max = 1e-4;
    const auto grid = pde::RadialGrid::uniform(q.pr.N, 6, 60);
    const auto bump = [](double a) { return [a](double x) { return a * (1.2 + std::cos(x)) * std::exp(-x / 4); }; };
    const pde::SimulationRun a = pde::simulate(q.pr, bump(q.lo), grid, c);
    const pde::SimulationRun b = pde::simulate(q.pr, bump(q.hi), grid, c);
    double worst = -INFINITY;
    for (std::size_t s = 0; s < std::min(a.snapshots.size(), b.snapshots.size()); ++s) {
      double sup = 0;
      for (double v : b.snapshots[s].u) sup = std::max(sup, v);
      for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max(worst, (a.snapshots[s].u[i] - b.snapshots[s].u[i]) / std::max(sup, 1e-300));
    }
    r.checks.push_back({"ordering pair " + std::to_string(++k), worst, 0.0, 1e-8, true,
                        worst <= 1e-8 && a.snapshots.size() == b.snapshots.size()});
  }

  for (const ProblemParams& pr : {ProblemParams{1, 1, 3, 2}, ProblemParams{2, 2, 3, 2}, ProblemParams{0.5, 0.5, 2, 1},
                                  ProblemParams{1, 0.5, 3, 1}}) {
    pde::SimulationConfig c = config(3);
    c.keep_snapshots = true;
    c.outputs_per_decade = 40;
    const auto grid = pde::RadialGrid::uniform(pr.N, 5, 50);
    const pde::SimulationRun run = pde::simulate(pr, [](double x) { return 0.5 * (1 + std::cos(kPi * x / 5)); }, grid, c);
    double worst = 0.0, prev = INFINITY;
    for (const auto& s : run.snapshots) {
      const double E = pde::lyapunov_energy(s.u, pr, grid);
      if (std::isfinite(prev)) worst = std::max(worst, (E - prev) / std::max(1.0, std::abs(prev)));
      prev = E;
    }
    r.checks.push_back({"Lyapunov increase, m=" + std::to_string(pr.m).substr(0, 3) + " p=" +
                            std::to_string(pr.p).substr(0, 3),
                        worst, 0.0, 1e-6, true, worst <= 1e-6});
  }

  for (double m : {1.0, 2.0, 0.6}) {
    for (int N : {1, 2, 3}) {
      pde::SimulationConfig c = config(5);
      c.keep_snapshots = true;
      c.reaction = pde::Reaction::none;
      c.boundary = pde::Boundary::zero_flux;
      const auto grid = pde::RadialGrid::uniform(N, 10, 100);
      const pde::SimulationRun run =
          pde::simulate({m, 1, N, 1}, [](double x) { return 0.2 + std::exp(-x * x); }, grid, c);
      const double M0 = pde::mass(run.snapshots.front().u, grid);
      double worst = 0;
      for (const auto& s : run.snapshots) worst = std::max(worst, std::abs(pde::mass(s.u, grid) / M0 - 1));
      r.checks.push_back({"mass drift m=" + std::to_string(m).substr(0, 3) + " N=" + std::to_string(N), worst, 0.0,
                          1e-6, true, worst <= 1e-6});
    }
  }

  double wr = 0, rec = 0, der = 0;
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const specfun::BesselOrder o(nu);
    for (double x : {0.1, 0.7, 1.0, 3.3, 5.0, 12.0, 20.0}) {
      const double W = specfun::bessel_i(o, x) * specfun::bessel_k_prime(o, x) -
                       specfun::bessel_i_prime(o, x) * specfun::bessel_k(o, x);
      wr = std::max(wr, std::abs(W * x + 1));
      if (nu >= 1.0) {
        const specfun::BesselOrder lo(nu - 1), hi(nu + 1);
        const double lhs = specfun::bessel_j(lo, x) + specfun::bessel_j(hi, x);
        rec = std::max(rec, std::abs(lhs - 2 * nu / x * specfun::bessel_j(o, x)));
      }
      const double h = 1e-5 * x;
      const double fd = (specfun::bessel_j(o, x + h) - specfun::bessel_j(o, x - h)) / (2 * h);
      der = std::max(der, std::abs(fd - specfun::bessel_j_prime(o, x)));
      const double fk = (specfun::bessel_k(o, x + h) - specfun::bessel_k(o, x - h)) / (2 * h);
      der = std::max(der, std::abs(fk / specfun::bessel_k_prime(o, x) - 1));
    }
  }
  r.checks.push_back({"Wronskian x(I K' - I' K) + 1", wr, 0.0, 1e-12, true, wr <= 1e-12});
  r.checks.push_back({"recurrence J_{nu-1} + J_{nu+1} - 2nu/x J_nu", rec, 0.0, 1e-13, true, rec <= 1e-13});
  r.checks.push_back({"derivative vs central difference", der, 0.0, 1e-7, true, der <= 1e-7});
  return r;
}

RecipeResult duhamel_recipe() {
  RecipeResult r{"duhamel-limits", 0, "m = 1, N = 2, p < 1: exponent iteration sigma_k -> 1/(1-p), delta_k -> 0", {}};
  for (double p : {0.25, 0.5, 0.9}) {
    const rates::DuhamelSequence s = rates::duhamel_sequence(p, 400);
    const std::string tag = "p=" + std::to_string(p).substr(0, 4);
    r.checks.push_back(absolute("sigma limit " + tag, s.sigma_limit, 1 / (1 - p), 1e-8));
    r.checks.push_back(absolute("sigma_400 " + tag, s.sigma.back(), 1 / (1 - p), 1e-8));
    r.checks.push_back(absolute("delta_400 " + tag, s.delta.back(), 0.0, 1e-8));
  }
  const double L = 1.2, t = 1e6;
  const double G = rates::duhamel_convolve([](double) { return 1.0; }, 0.5, L, {t})[0];
  r.checks.push_back(relative("kernel integral / (L^2 log t), L=1.2, t=1e6", G / (L * L * std::log(t)), 1.0, 0.03));
  return r;
}

const std::map<std::string, std::function<RecipeResult()>>& registry() {
  static const std::map<std::string, std::function<RecipeResult()>> table = {
      {"Lstar", critical_length_recipe},       {"stationary-explicit", stationary_recipe},
      {"eigen-rate", eigen_recipe},            {"selfsim-asymptotics", selfsim_recipe},
      {"dichotomy", dichotomy_recipe},         {"rate-pm", rate_pm_recipe},
      {"rate-logpower", rate_logpower_recipe}, {"rate-lambda0", rate_lambda0_recipe},
      {"rate-outside", rate_outside_recipe},   {"properties", properties_recipe},
      {"duhamel-limits", duhamel_recipe},
  };
  return table;
}

}  // namespace

bool RecipeResult::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<Check> RecipeResult::flat_bound_checks() const {
  std::vector<Check> out;
  for (const Check& c : checks)
    if (c.name.rfind("flat bound", 0) == 0) out.push_back(c);
  return out;
}

std::vector<std::string> recipe_names() {
  return {"Lstar",      "stationary-explicit", "eigen-rate",   "selfsim-asymptotics", "dichotomy", "rate-pm",
          "rate-logpower", "rate-lambda0",     "rate-outside", "properties",          "duhamel-limits"};
}

RecipeResult run_recipe(const std::string& name) {
  const auto& table = registry();
  const auto it = table.find(name);
  if (it == table.end()) throw std::out_of_range("unknown recipe: " + name);
  const auto start = std::chrono::steady_clock::now();
  RecipeResult r = it->second();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace growup::verify
