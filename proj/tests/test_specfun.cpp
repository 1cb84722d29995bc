#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "growup/specfun.hpp"

using namespace growup::specfun;

namespace {

constexpr double kPi = std::numbers::pi;

// Ascending series in long double, independent of the library path.
long double series_j(long double nu, long double x) {
  const long double h = x / 2;
  long double term = std::pow(h, nu) / std::tgamma(nu + 1), sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= -h * h / (k * (k + nu));
    sum += term;
    if (std::fabs(term) < 1e-24L * std::fabs(sum) && k > 5) break;
  }
  return sum;
}

long double series_i(long double nu, long double x) {
  const long double h = x / 2;
  long double term = std::pow(h, nu) / std::tgamma(nu + 1), sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= h * h / (k * (k + nu));
    sum += term;
    if (term < 1e-24L * sum) break;
  }
  return sum;
}

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt by the trapezoid rule,
// which converges geometrically for this analytic, fast-decaying integrand.
double integral_k(double nu, double x) {
  const double h = 1e-3;
  long double sum = 0.5L * std::exp(-x);
  for (int i = 1;; ++i) {
    const double t = i * h;
    const double e = std::exp(-x * std::cosh(t)) * std::cosh(nu * t);
    sum += e;
    if (x * std::cosh(t) > 750.0) break;
  }
  return static_cast<double>(sum * h);
}

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(a * std::pow(b / a, i / (n - 1.0)));
  return g;
}

const std::vector<double> kOrders{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};

}  // namespace

TEST_CASE("J of order 1/2 vanishes at pi") {
  CHECK(std::abs(bessel_j(BesselOrder(0.5), kPi)) < 1e-15);
}

TEST_CASE("J0 at its first zero") {
  CHECK(std::abs(bessel_j(BesselOrder(0.0), 2.404825557695773)) < 1e-10);
  const double z = bessel_j_zero(BesselOrder(0.0), 1);
  CHECK(z == doctest::Approx(2.404825557695773).epsilon(1e-14));
  CHECK(std::abs(static_cast<double>(series_j(0.0L, z))) < 1e-14);
}

TEST_CASE("J agrees with the power series") {
  CHECK(bessel_j(BesselOrder(0.5), 1.0) ==
        doctest::Approx(std::sqrt(2.0 / kPi) * std::sin(1.0)).epsilon(1e-14));
  for (double nu : kOrders) {
    for (double x : log_grid(1e-3, 12.0, 60)) {
      const double ref = static_cast<double>(series_j(nu, x));
      if (std::abs(ref) < 1e-3) continue;
      INFO("nu=" << nu << " x=" << x);
      CHECK(std::abs(bessel_j(BesselOrder(nu), x) - ref) <= 1e-12 * std::abs(ref));
    }
  }
}

TEST_CASE("I agrees with the power series") {
  CHECK(bessel_i(BesselOrder(0.0), 1e-8) == doctest::Approx(1.0).epsilon(1e-15));
  for (double nu : kOrders) {
    for (double x : log_grid(1e-3, 30.0, 40)) {
      const double ref = static_cast<double>(series_i(nu, x));
      INFO("nu=" << nu << " x=" << x);
      CHECK(std::abs(bessel_i(BesselOrder(nu), x) - ref) <= 1e-12 * ref);
    }
  }
}

TEST_CASE("K agrees with its integral representation") {
  CHECK(bessel_k(BesselOrder(0.5), 1.0) ==
        doctest::Approx(std::sqrt(kPi / 2.0) * std::exp(-1.0)).epsilon(1e-14));
  for (double nu : kOrders) {
    for (double x : log_grid(1e-2, 50.0, 30)) {
      const double ref = integral_k(nu, x);
      INFO("nu=" << nu << " x=" << x);
      CHECK(bessel_k(BesselOrder(nu), x) == doctest::Approx(ref).epsilon(1e-11));
    }
  }
}

TEST_CASE("K is positive, decreasing, with exponential decay") {
  for (double nu : kOrders) {
    for (double x : log_grid(1e-3, 600.0, 80)) {
      CHECK(bessel_k(BesselOrder(nu), x) > 0.0);
      CHECK(bessel_k_prime(BesselOrder(nu), x) < 0.0);
    }
    const double x = 500.0;
    const double ratio = bessel_k(BesselOrder(nu), x) / (std::sqrt(kPi / (2 * x)) * std::exp(-x));
    CHECK(ratio == doctest::Approx(1.0 + (4 * nu * nu - 1) / (8 * x)).epsilon(1e-5));
  }
}

TEST_CASE("Wronskian of I and K") {
  for (double nu : kOrders) {
    for (double x : {0.5, 1.0, 5.0}) {
      const BesselOrder o(nu);
      const double w = bessel_i(o, x) * bessel_k_prime(o, x) - bessel_i_prime(o, x) * bessel_k(o, x);
      CHECK(std::abs(w + 1.0 / x) < 1e-10);
    }
  }
}

TEST_CASE("three-term recurrence for J") {
  for (double nu : {1.0, 1.5, 2.0, 2.5}) {
    for (double x : log_grid(1e-2, 60.0, 97)) {
      const double jp = bessel_j(BesselOrder(nu + 1), x);
      if (std::abs(jp) <= 1e-30) continue;
      const double rhs = 2 * nu / x * bessel_j(BesselOrder(nu), x) - bessel_j(BesselOrder(nu - 1), x);
      INFO("nu=" << nu << " x=" << x);
      CHECK(std::abs(jp - rhs) <= 1e-9 * std::abs(jp));
    }
  }
}

TEST_CASE("derivative identities") {
  CHECK(std::abs(bessel_j_prime(BesselOrder(0.0), 1e-9)) < 1e-9);
  CHECK(bessel_j_prime(BesselOrder(0.0), 1.0) ==
        doctest::Approx(-bessel_j(BesselOrder(1.0), 1.0)).epsilon(1e-15));
  // J'_nu = J_{nu-1} - (nu/x) J_nu
  for (double nu : {1.0, 1.5, 2.0}) {
    for (double x : {0.3, 2.0, 7.5}) {
      const BesselOrder o(nu);
      const double alt = bessel_j(BesselOrder(nu - 1), x) - nu / x * bessel_j(o, x);
      CHECK(bessel_j_prime(o, x) == doctest::Approx(alt).epsilon(1e-12));
    }
  }
  const double h = 1e-6, x = kPi / 2;
  const double fd = (bessel_j(BesselOrder(0.5), x + h) - bessel_j(BesselOrder(0.5), x - h)) / (2 * h);
  CHECK(std::abs(bessel_j_prime(BesselOrder(0.5), x) - fd) < 1e-8);
}

TEST_CASE("derivatives match centered differences on a log grid") {
  const double h = 1e-6;
  using Fn = double (*)(BesselOrder, double);
  const std::vector<std::pair<Fn, Fn>> pairs{{bessel_j, bessel_j_prime},
                                             {bessel_i, bessel_i_prime},
                                             {bessel_k, bessel_k_prime}};
  for (double nu : kOrders) {
    const BesselOrder o(nu);
    for (const auto& [f, df] : pairs) {
      for (double x : log_grid(0.1, 20.0, 50)) {
        const double fd = (f(o, x + h) - f(o, x - h)) / (2 * h);
        // Absolute 1e-6 for O(1) values; scaled where the function itself is large.
        const double scale = std::max(1.0, std::abs(f(o, x)));
        INFO("nu=" << nu << " x=" << x);
        CHECK(std::abs(df(o, x) - fd) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("half-integer closed forms") {
  for (double x : log_grid(1e-3, 50.0, 200)) {
    const double env = std::sqrt(2.0 / (kPi * x));
    CHECK(std::abs(bessel_j(BesselOrder(0.5), x) - std::cyl_bessel_j(0.5, x)) <= 1e-12 * env);
    CHECK(bessel_k(BesselOrder(0.5), x) ==
          doctest::Approx(std::sqrt(kPi / (2 * x)) * std::exp(-x)).epsilon(1e-12));
    CHECK(bessel_k(BesselOrder(1.5), x) ==
          doctest::Approx(std::cyl_bessel_k(1.5, x)).epsilon(1e-12));
  }
}

TEST_CASE("scaled I and overflow guard") {
  const BesselOrder o(1.0);
  const ScaledValue s = bessel_i_scaled(o, 500.0);
  CHECK(s.mantissa * std::exp(s.exponent) == doctest::Approx(bessel_i(o, 500.0)).epsilon(1e-12));
  const ScaledValue big = bessel_i_scaled(o, 650.0);
  const double ref = std::exp(-650.0) * std::cyl_bessel_i(1.0, 650.0);
  CHECK(big.mantissa == doctest::Approx(ref).epsilon(1e-12));
  CHECK_THROWS_AS(bessel_i(o, 800.0), std::overflow_error);
  for (double nu : kOrders) {
    const ScaledValue k = bessel_k_scaled(BesselOrder(nu), 650.0);
    CHECK(k.exponent == -650.0);
    CHECK(k.mantissa == doctest::Approx(std::exp(650.0) * std::cyl_bessel_k(nu, 650.0)).epsilon(1e-12));
    const ScaledValue s = bessel_k_scaled(BesselOrder(nu), 3.0);
    CHECK(s.mantissa * std::exp(s.exponent) == doctest::Approx(bessel_k(BesselOrder(nu), 3.0)).epsilon(1e-14));
  }
}

TEST_CASE("domain errors and order validation") {
  CHECK_THROWS_AS(bessel_j(BesselOrder(0.0), 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(BesselOrder(0.0), -1.0), std::domain_error);
  CHECK_THROWS_AS(BesselOrder(0.3), std::invalid_argument);
  CHECK(BesselOrder::for_dimension(5).value() == 1.5);
}

TEST_CASE("bracketed root finder") {
  const auto r0 = find_root([](double x) { return x; }, -1.0, 1.0);
  CHECK(r0.root == 0.0);
  const auto rj = find_root([](double x) { return bessel_j(BesselOrder(0.0), x); }, 2.0, 3.0);
  CHECK(rj.root == doctest::Approx(2.404825557695773).epsilon(1e-12));
  CHECK(rj.residual <= 1e-12);
  CHECK(rj.lo < rj.root);
  CHECK(rj.root < rj.hi);
  const BesselOrder half(0.5);
  const auto rs = find_root(
      [&](double L) { return 0.5 * bessel_j(half, L) + L * bessel_j_prime(half, L); }, 1.0, 2.0);
  CHECK(std::abs(rs.root - kPi / 2) < 1e-12);
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1; }, -1.0, 1.0), RootError);
  CHECK_THROWS_AS(find_root([](double x) { return std::cos(x); }, 0.0, 3.0, {.tol = 0.0, .max_iterations = 10}),
                  RootError);
}

TEST_CASE("golden-section maximization") {
  const double x = golden_maximize([](double t) { return -(t - 0.3) * (t - 0.3); }, 0.0, 1.0);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-8));
}
