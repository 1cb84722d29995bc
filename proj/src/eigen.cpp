#include "growup/eigen.hpp"

#include <cmath>
#include <stdexcept>

#include "growup/io.hpp"
#include "growup/ode.hpp"
#include "growup/specfun.hpp"

namespace growup::eigen {

namespace {

using specfun::BesselOrder;

// K_{nu+1}(x) / K_nu(x), safe where K itself underflows.
double k_ratio(BesselOrder o, double x) {
  const auto a = specfun::bessel_k_scaled(BesselOrder(o.value() + 1.0), x);
  const auto b = specfun::bessel_k_scaled(o, x);
  return a.mantissa / b.mantissa;
}

// Φ in the variable a = L√(1-λ): √(1-λ) = a/L exactly.
double phi_of_a(double a, double L, BesselOrder o) {
  const double nu = o.value();
  const double sl = std::sqrt((1.0 - a / L) * (1.0 + a / L));
  const double jterm = (a / L) * specfun::bessel_j_prime(o, a) / specfun::bessel_j(o, a);
  // √λ K'/K(L√λ) = ν/L - √λ K_{ν+1}/K_ν
  const double b = L * sl;
  const double kterm = nu / L - sl * k_ratio(o, b);
  return jterm - kterm;
}

// Φ at λ = 0, the limit a -> L.
double phi_at_zero(double L, BesselOrder o) {
  const double jj = specfun::bessel_j_prime(o, L) / specfun::bessel_j(o, L);
  return o.value() > 0.0 ? jj + o.value() / L : jj;
}

// r^{-ν} J_ν(k r) and r^{-ν} K_ν-type helpers with their r-derivatives.
std::pair<double, double> j_weighted(BesselOrder o, double k, double r) {
  const double nu = o.value();
  const double x = k * r;
  if (x < 1e-4) {
    const double c0 = std::pow(k / 2.0, nu) / std::tgamma(nu + 1.0);
    const double c1 = -c0 * k * k / (4.0 * (nu + 1.0));
    return {c0 + c1 * r * r, 2.0 * c1 * r};
  }
  const double rn = std::pow(r, -nu);
  return {rn * specfun::bessel_j(o, x), -k * rn * specfun::bessel_j(BesselOrder(nu + 1.0), x)};
}

}  // namespace

PhiValue phi_capital(double lambda, double L, int N) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("phi_capital: need 0 < lambda < 1");
  if (!(L > 0.0)) throw std::domain_error("phi_capital: need L > 0");
  const BesselOrder o = BesselOrder::for_dimension(N);
  const double a = L * std::sqrt(1.0 - lambda);
  const double j = specfun::bessel_j(o, a);
  if (std::abs(j) < 1e-14) return {NAN, true};
  const double sl = std::sqrt(lambda);
  const double jterm = std::sqrt(1.0 - lambda) * specfun::bessel_j_prime(o, a) / j;
  const double kterm = o.value() / L - sl * k_ratio(o, L * sl);
  return {jterm - kterm, false};
}

double lambda0(double L, int N) {
  if (!(L > 0.0)) throw std::domain_error("lambda0: need L > 0");
  const BesselOrder o = BesselOrder::for_dimension(N);
  const double eta = specfun::bessel_j_zero(o, 1);
  const bool full = L < eta;
  const double a_hi = full ? L : eta;
  const auto f = [&](double a) {
    if (a >= a_hi) return full ? phi_at_zero(L, o) : -INFINITY;
    return phi_of_a(a, L, o);
  };
  // Small a is λ near 1; the first sign change from the left is the largest root.
  const int n = 4000;
  double a_prev = a_hi * 1e-9, f_prev = f(a_prev);
  for (int i = 1; i <= n; ++i) {
    const double a = i == n ? (full ? a_hi : eta * (1.0 - 1e-12)) : a_hi * i / n;
    const double fa = f(a);
    if (f_prev > 0.0 && fa <= 0.0) {
      const double root = fa == 0.0 ? a : specfun::find_root(f, a_prev, a, {.tol = 1e-13}).root;
      return (1.0 - root / L) * (1.0 + root / L);
    }
    a_prev = a;
    f_prev = fa;
  }
  throw specfun::RootError("lambda0: no root, L does not exceed the critical length");
}

std::pair<double, double> EigenSolution::eval(double r) const {
  if (r < 0.0) throw std::domain_error("EigenSolution::eval: negative radius");
  const BesselOrder o = BesselOrder::for_dimension(N);
  const double nu = o.value();
  if (r <= L) return j_weighted(o, std::sqrt(1.0 - lambda0), r);
  // C r^{-ν} K_ν(√λ r) written relative to r = L to avoid under/overflow.
  const double sl = std::sqrt(lambda0);
  const double a = L * std::sqrt(1.0 - lambda0);
  const double phiL = std::pow(L, -nu) * specfun::bessel_j(o, a);
  const auto kr = specfun::bessel_k_scaled(o, sl * r);
  const auto kL = specfun::bessel_k_scaled(o, sl * L);
  const double phi = phiL * std::pow(L / r, nu) * kr.mantissa / kL.mantissa * std::exp(-sl * (r - L));
  const double ratio = k_ratio(o, sl * r);
  return {phi, -sl * ratio * phi};
}

std::vector<std::pair<double, double>> EigenSolution::sample(double R_max, int n) const {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) {
    const double r = R_max * i / (n - 1.0);
    out.emplace_back(r, eval(r).first);
  }
  return out;
}

EigenSolution eigenprofile(double lambda, double L, int N) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("eigenprofile: need 0 < lambda < 1");
  const BesselOrder o = BesselOrder::for_dimension(N);
  const double a = L * std::sqrt(1.0 - lambda);
  const double eta = specfun::bessel_j_zero(o, 1);
  const double j = specfun::bessel_j(o, a);
  if (!(a < eta) || !(j > 0.0)) throw std::domain_error("eigenprofile: profile not positive, wrong root branch");
  const auto k = specfun::bessel_k_scaled(o, L * std::sqrt(lambda));
  const double log_C = std::log(j) - std::log(k.mantissa) - k.exponent;
  return {lambda, std::exp(log_C), log_C, L, N};
}

SeparatedProfile separated_profile(double m, double L, int N, double lambda, double R_max) {
  if (!(m > 0.0 && m < 1.0)) throw std::domain_error("separated_profile: need 0 < m < 1");
  if (!(lambda > 0.0)) throw std::domain_error("separated_profile: need lambda > 0");
  if (!(L > 0.0) || N < 1) throw std::domain_error("separated_profile: invalid L or N");
  using S2 = ode::State<2>;
  const double q = 1.0 / m;
  const auto rhs = [=](double r, const S2& y) -> S2 {
    const double h = y[0];
    const double hq = h >= 0.0 ? std::pow(h, q) : -std::pow(-h, q);
    const double a = r < L ? 1.0 : 0.0;
    return {y[1], -(N - 1) / r * y[1] - a * h + lambda * hq};
  };
  // h = 1 + c r^2 + d r^4 near the origin
  const double c = (lambda - 1.0) / (2.0 * N);
  const double d = c * (lambda / m - 1.0) / (4.0 * (N + 2.0));
  const double r_start = std::min(1e-3, L / 10.0);
  const double r2 = r_start * r_start;

  SeparatedProfile prof{lambda, m, L, N, {}, std::nullopt};
  prof.samples.push_back({0.0, 1.0, 1.0, 0.0});
  const auto store = [&](double r, const S2& y) {
    prof.samples.push_back({r, y[0] > 0.0 ? std::pow(y[0], q) : 0.0, y[0], y[1]});
    return true;
  };
  const ode::Tolerances tol{.rtol = 1e-10, .atol = 1e-13, .h_init = 1e-4, .h_max = L / 4.0};
  // Inside the ball stop only at h = 0; integration restarts at L so that the
  // discontinuous coefficient never sits inside a step.
  const ode::Event<2> zero{[](double, const S2& y) { return y[0]; }, 1e-12};
  auto in = ode::integrate<2>(rhs, r_start, {1.0 + c * r2 + d * r2 * r2, 2.0 * c * r_start + 4.0 * d * r2 * r_start},
                              L, tol, store, &zero);
  if (in.stop == ode::Stop::failed) throw std::runtime_error("separated_profile: integration failure");
  if (in.stop == ode::Stop::event) {
    prof.R_lambda = in.t;
    return prof;
  }
  if (in.y[1] >= 0.0) return prof;
  prof.samples.pop_back();
  const ode::Event<2> outer{[](double, const S2& y) { return std::min(y[0], -y[1]); }, 1e-12};
  ode::Tolerances tol_out = tol;
  tol_out.h_max = R_max / 50.0;
  const auto out = ode::integrate<2>(rhs, L, in.y, R_max, tol_out, store, &outer);
  if (out.stop == ode::Stop::failed) throw std::runtime_error("separated_profile: integration failure");
  if (out.stop == ode::Stop::event && out.y[0] <= std::abs(out.y[1]) * 1e-9 + 1e-12 && out.y[1] < 0.0)
    prof.R_lambda = out.t;
  return prof;
}

double lambda_star(double m, double L, int N) {
  const double R_max = 1e3 * L;
  double lo = 1e-6, hi = 1.0;
  if (!separated_profile(m, L, N, lo, R_max).R_lambda)
    throw specfun::RootError("lambda_star: no finite R_lambda at small lambda (L <= L*)");
  if (separated_profile(m, L, N, hi, R_max).R_lambda)
    throw specfun::RootError("lambda_star: profile at lambda = 1 vanishes");
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (separated_profile(m, L, N, mid, R_max).R_lambda)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::string to_csv(const std::vector<std::pair<double, double>>& samples, const std::string& x_name,
                   const std::string& y_name) {
  io::Csv csv({x_name, y_name});
  for (const auto& [x, y] : samples) csv.row({x, y});
  return csv.str();
}

}  // namespace growup::eigen
