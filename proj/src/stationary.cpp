#include "growup/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "growup/io.hpp"
#include "growup/ode.hpp"
#include "growup/specfun.hpp"

namespace growup::stationary {

namespace {

constexpr double kTaylorEnd = 1e-3;

using S2 = ode::State<2>;

double signed_pow(double v, double g) {
  return v >= 0.0 ? std::pow(v, g) : -std::pow(-v, g);
}

ode::Rhs<2> inner_rhs(double gamma, int N) {
  return [gamma, N](double r, const S2& y) -> S2 {
    return {y[1], -(N - 1) / r * y[1] - signed_pow(y[0], gamma)};
  };
}

InnerSample taylor(double gamma, int N, double r) {
  const double a = -1.0 / (2.0 * N);
  const double b = gamma / (8.0 * N * (N + 2.0));
  const double r2 = r * r;
  return {r, 1.0 + a * r2 + b * r2 * r2, 2.0 * a * r + 4.0 * b * r2 * r};
}

double find_sign_change(const std::function<double(double)>& f,
                        const std::vector<InnerSample>& grid, double tol) {
  double a = grid.front().r, fa = f(a);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double b = grid[i].r, fb = f(b);
    if (fa * fb <= 0.0) {
      if (fb == 0.0) return b;
      return specfun::find_root(f, a, b, {.tol = tol}).root;
    }
    a = b;
    fa = fb;
  }
  throw specfun::RootError("no sign change along the inner profile");
}

// (phi(r) - phi(L)) / phi'(L) for the radial fundamental harmonic phi.
double harmonic_ratio(int N, double L, double r) {
  if (N == 1) return r - L;
  if (N == 2) return L * std::log(r / L);
  return L * (1.0 - std::pow(r / L, 2.0 - N)) / (N - 2.0);
}

}  // namespace

InnerSample InnerProfile::at(double r) const {
  if (r < 0.0 || r > r_end_ * (1.0 + 1e-14))
    throw std::out_of_range("InnerProfile::at: radius outside the integrated range");
  if (r <= kTaylorEnd) return taylor(gamma_, N_, r);
  auto it = std::upper_bound(samples_.begin(), samples_.end(), r,
                             [](double x, const InnerSample& s) { return x < s.r; });
  const InnerSample& s = *std::prev(it);
  if (s.r == r) return s;
  const auto step = ode::dopri_step<2>(inner_rhs(gamma_, N_), s.r, {s.v, s.dv}, r - s.r);
  return {r, step.y[0], step.y[1]};
}

InnerProfile shoot_inner(double gamma, int N, double r_max) {
  if (!(gamma > 0.0)) throw std::invalid_argument("shoot_inner: gamma must be positive");
  if (N < 1) throw std::invalid_argument("shoot_inner: N must be >= 1");
  if (!(r_max > kTaylorEnd)) throw std::invalid_argument("shoot_inner: r_max too small");
  InnerProfile prof;
  prof.gamma_ = gamma;
  prof.N_ = N;
  prof.samples_.push_back({0.0, 1.0, 0.0});

  const InnerSample start = taylor(gamma, N, kTaylorEnd);
  ode::Tolerances tol{.rtol = 1e-12, .atol = 1e-15, .h_init = 1e-4, .h_max = r_max / 20.0};
  const ode::Event<2> ev{[](double, const S2& y) { return y[0]; }, 1e-13};
  auto& samples = prof.samples_;
  const auto out = ode::integrate<2>(
      inner_rhs(gamma, N), kTaylorEnd, {start.v, start.dv}, r_max, tol,
      [&samples](double r, const S2& y) {
        samples.push_back({r, y[0], y[1]});
        return true;
      },
      &ev);
  if (out.stop == ode::Stop::failed) throw std::runtime_error("shoot_inner: step-size failure");
  prof.r_end_ = out.t;
  if (out.stop == ode::Stop::event) {
    prof.r0_ = out.t;
    samples.back().v = 0.0;
  } else if (gamma > 1.0) {
    prof.tail_K_ = std::pow(out.t, 2.0 / (gamma - 1.0)) * out.y[0];
  }
  return prof;
}

FProfile compute_F(const InnerProfile& inner) {
  const int N = inner.N();
  if (N < 3) throw std::invalid_argument("compute_F: requires N >= 3");
  const auto F = [&](double r) {
    const InnerSample s = inner.at(r);
    return s.v + s.r * s.dv / (N - 2.0);
  };
  FProfile out;
  for (const auto& s : inner.samples()) out.samples.emplace_back(s.r, s.v + s.r * s.dv / (N - 2.0));
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    if (out.samples[i].second <= 0.0) {
      const double a = out.samples[i - 1].first, b = out.samples[i].first;
      out.r_star = out.samples[i].second == 0.0
                       ? b
                       : specfun::find_root(F, a, b, {.tol = 1e-15}).root;
      break;
    }
  }
  return out;
}

Matching c1_of_A(double A, const ProblemParams& params, const InnerProfile& inner) {
  params.validate();
  const int N = params.N;
  if (N < 3) throw std::invalid_argument("c1_of_A: requires N >= 3");
  if (!(A > 0.0)) throw std::domain_error("c1_of_A: A must be positive");
  const double g = params.gamma();
  const double s = std::pow(A, (g - 1.0) / 2.0) * params.L;
  if ((inner.r0() && s >= *inner.r0()) || s > inner.r_end())
    throw std::domain_error("c1_of_A: matching point beyond the first zero of v");
  const InnerSample v = inner.at(s);
  const double F = v.v + s * v.dv / (N - 2.0);
  const double c2 = -std::pow(A, (g + 1.0) / 2.0) * v.dv * std::pow(params.L, N - 1.0) / (N - 2.0);
  return {A * F, c2};
}

Matching c1_of_A(double A, const ProblemParams& params) {
  const double s = std::pow(A, (params.gamma() - 1.0) / 2.0) * params.L;
  return c1_of_A(A, params, shoot_inner(params.gamma(), params.N, 2.0 * s + 1.0));
}

std::optional<double> a_star(const ProblemParams& params, const InnerProfile& inner) {
  const double g = params.gamma();
  if (g == 1.0) return std::nullopt;
  const FProfile F = compute_F(inner);
  if (!F.r_star) return std::nullopt;
  return std::pow(*F.r_star / params.L, 2.0 / (g - 1.0));
}

double k_star(const ProblemParams& params) {
  params.validate();
  const double g = params.gamma();
  if (params.N < 3) throw std::invalid_argument("k_star: requires N >= 3");
  if (!(g > 1.0)) throw std::invalid_argument("k_star: defined only for gamma > 1");
  const InnerProfile inner = shoot_inner(g, params.N);
  const FProfile F = compute_F(inner);
  const double hi = F.r_star ? *F.r_star : inner.r_end();
  const double k = 2.0 / (g - 1.0);
  const double logL = std::log(params.L);
  const int N = params.N;
  // log c1 as a function of log s, s = A^{(gamma-1)/2} L.
  const auto log_c1 = [&](double ls) {
    const InnerSample v = inner.at(std::exp(ls));
    const double f = v.v + v.r * v.dv / (N - 2.0);
    return f > 0.0 ? k * (ls - logL) + std::log(f) : -INFINITY;
  };
  const int n = 200;
  const double a = std::log(hi * 1e-6), b = std::log(hi * (1.0 - 1e-9));
  int best = 0;
  double best_val = -INFINITY;
  for (int i = 0; i < n; ++i) {
    const double val = log_c1(a + (b - a) * i / (n - 1.0));
    if (val > best_val) {
      best_val = val;
      best = i;
    }
  }
  if (best == 0 || best == n - 1) throw std::runtime_error("k_star: c1 is monotone on the bracket");
  const double lo_s = a + (b - a) * (best - 1) / (n - 1.0);
  const double hi_s = a + (b - a) * (best + 1) / (n - 1.0);
  const double ls = specfun::golden_maximize(log_c1, lo_s, hi_s, 1e-13);
  return std::exp(log_c1(ls));
}

double critical_length(int N) {
  if (N < 3) throw std::invalid_argument("critical_length: requires N >= 3");
  const auto order = specfun::BesselOrder::for_dimension(N);
  const double nu = order.value();
  const auto f = [&](double L) {
    return nu * specfun::bessel_j(order, L) + L * specfun::bessel_j_prime(order, L);
  };
  const double step = 0.01;
  double a = step, fa = f(a);
  for (double b = a + step; b < 100.0; b += step) {
    const double fb = f(b);
    if (fa * fb <= 0.0) return specfun::find_root(f, a, b, {.tol = 1e-15}).root;
    a = b;
    fa = fb;
  }
  throw specfun::RootError("critical_length: no root bracketed");
}

std::pair<double, double> StationaryProfile::eval(double r) const {
  if (r < 0.0) throw std::domain_error("StationaryProfile::eval: negative radius");
  if (r < L) {
    const double rho = std::pow(A, (gamma - 1.0) / 2.0);
    const InnerSample v = inner->at(rho * r);
    return {A * v.v, A * rho * v.dv};
  }
  return {c1 + c2 * std::pow(r, 2.0 - N), (2.0 - N) * c2 * std::pow(r, 1.0 - N)};
}

std::vector<InnerSample> StationaryProfile::sample(double R_max, int n) const {
  std::vector<InnerSample> out;
  for (int i = 0; i < n; ++i) {
    const double r = R_max * i / (n - 1.0);
    const auto [w, dw] = eval(r);
    out.push_back({r, w, dw});
  }
  return out;
}

StationaryProfile build_stationary(const ProblemParams& params, double A) {
  params.validate();
  const double g = params.gamma();
  const double s = std::pow(A, (g - 1.0) / 2.0) * params.L;
  auto inner = std::make_shared<InnerProfile>(shoot_inner(g, params.N, 2.0 * s + 1.0));
  const Matching mc = c1_of_A(A, params, *inner);
  return {A, mc.c1, mc.c2, params.L, params.N, g, inner};
}

std::pair<double, double> DirichletProfile::eval(double r) const {
  if (r < 0.0 || r > R * (1.0 + 1e-12)) throw std::domain_error("DirichletProfile::eval: r outside [0,R]");
  const double rho = std::pow(A, (gamma - 1.0) / 2.0);
  if (r < L || R <= L) {
    const InnerSample v = inner->at(std::min(rho * r, inner->r_end()));
    return {A * v.v, A * rho * v.dv};
  }
  const InnerSample v = inner->at(rho * L);
  const double wL = A * v.v, dwL = A * rho * v.dv;
  return {wL + dwL * harmonic_ratio(N, L, r), dwL * std::pow(L / r, N - 1.0)};
}

std::vector<InnerSample> DirichletProfile::sample(int n) const {
  std::vector<InnerSample> out;
  for (int i = 0; i < n; ++i) {
    const double r = R * i / (n - 1.0);
    const auto [w, dw] = eval(r);
    out.push_back({r, w, dw});
  }
  return out;
}

DirichletProfile dirichlet_stationary(const ProblemParams& params, double R) {
  params.validate();
  const int N = params.N;
  const double g = params.gamma(), L = params.L;
  if (!(R > 0.0)) throw std::domain_error("dirichlet_stationary: R must be positive");
  if (N >= 3 && g >= (N + 2.0) / (N - 2.0))
    throw std::domain_error("dirichlet_stationary: no positive solution for gamma >= gamma_S");

  auto inner = std::make_shared<InnerProfile>(shoot_inner(g, N));
  if (!inner->r0()) throw std::runtime_error("dirichlet_stationary: inner profile has no zero");
  const double r0 = *inner->r0();
  DirichletProfile d{R, 1.0, L, N, g, inner};

  if (g == 1.0) {
    const double target = R <= L ? r0 : dirichlet_R_of_L(N, L);
    if (std::abs(R - target) > 1e-8 * target)
      throw std::domain_error("dirichlet_stationary: for gamma = 1 R must equal R(L)");
    return d;
  }
  if (R <= L) {
    d.A = std::pow(R / r0, -2.0 / (g - 1.0));
    return d;
  }
  const auto shoot = [&](double s) {
    const InnerSample v = inner->at(s);
    return v.v + (s / L) * v.dv * harmonic_ratio(N, L, R);
  };
  const double s = find_sign_change(shoot, inner->samples(), 1e-15);
  d.A = std::pow(s / L, 2.0 / (g - 1.0));
  return d;
}

double dirichlet_R_of_L(int N, double L) {
  if (N < 1) throw std::invalid_argument("dirichlet_R_of_L: N must be >= 1");
  if (N == 1) {
    if (!(L > 0.0 && L < M_PI / 2)) throw std::domain_error("dirichlet_R_of_L: need 0 < L < pi/2");
    return L + std::cos(L) / std::sin(L);
  }
  const auto order = specfun::BesselOrder::for_dimension(N);
  const double L1 = specfun::bessel_j_zero(order, 1);
  const double Ls = N >= 3 ? critical_length(N) : 0.0;
  if (!(L > Ls && L < L1)) throw std::domain_error("dirichlet_R_of_L: need L* < L < L1");
  // d = v'/v for v proportional to r^{-nu} J_nu(r)
  const double d = specfun::bessel_j_prime(order, L) / specfun::bessel_j(order, L) -
                   order.value() / L;
  if (N == 2) return L * std::exp(-1.0 / (L * d));
  const double q = 1.0 + (N - 2.0) / (L * d);
  return L * std::pow(q, -1.0 / (N - 2.0));
}

std::string to_csv(const std::vector<InnerSample>& samples) {
  io::Csv csv({"r", "w", "w_prime"});
  for (const auto& s : samples) csv.row({s.r, s.v, s.dv});
  return csv.str();
}

}  // namespace growup::stationary
