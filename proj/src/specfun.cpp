#include "growup/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace growup::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw std::domain_error(std::string(what) + ": argument must be > 0");
}

bool is_half(double nu) { return nu == 0.5; }

// K_{n+1/2}(x) = sqrt(pi/(2x)) e^{-x} sum_{k=0}^{n} (n+k)! / (k! (n-k)! (2x)^k)
double k_half_integer(double nu, double x) {
  const int n = static_cast<int>(nu - 0.5 + 0.25);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= n; ++k) {
    term *= static_cast<double>((n + k) * (n - k + 1)) / (k * 2.0 * x);
    sum += term;
  }
  return std::sqrt(kPi / (2.0 * x)) * std::exp(-x) * sum;
}

double k_any(double nu, double x) {
  if (nu > 0.0 && std::fmod(nu, 1.0) == 0.5) return k_half_integer(nu, x);
  return std::cyl_bessel_k(nu, x);
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  const double twice = 2.0 * nu;
  if (!(nu >= 0.0) || std::abs(twice - std::round(twice)) > 1e-12)
    throw std::invalid_argument("BesselOrder: order must be a nonnegative multiple of 1/2");
  nu_ = std::round(twice) / 2.0;
  half_ = std::fmod(nu_, 1.0) != 0.0;
}

BesselOrder BesselOrder::for_dimension(int N) {
  if (N < 2) throw std::invalid_argument("BesselOrder: dimension must be >= 2");
  return BesselOrder((N - 2) / 2.0);
}

double bessel_j(BesselOrder order, double x) {
  require_positive(x, "bessel_j");
  const double nu = order.value();
  if (is_half(nu)) return std::sqrt(2.0 / (kPi * x)) * std::sin(x);
  return std::cyl_bessel_j(nu, x);
}

double bessel_j_prime(BesselOrder order, double x) {
  require_positive(x, "bessel_j_prime");
  const double nu = order.value();
  if (is_half(nu)) {
    const double s = std::sqrt(2.0 / (kPi * x));
    return s * (std::cos(x) - std::sin(x) / (2.0 * x));
  }
  return -std::cyl_bessel_j(nu + 1.0, x) + nu / x * std::cyl_bessel_j(nu, x);
}

double bessel_i(BesselOrder order, double x) {
  require_positive(x, "bessel_i");
  if (x > 700.0) throw std::overflow_error("bessel_i: overflow, use bessel_i_scaled");
  const double nu = order.value();
  if (is_half(nu)) return std::sqrt(2.0 / (kPi * x)) * std::sinh(x);
  return std::cyl_bessel_i(nu, x);
}

double bessel_i_prime(BesselOrder order, double x) {
  require_positive(x, "bessel_i_prime");
  if (x > 700.0) throw std::overflow_error("bessel_i_prime: overflow");
  const double nu = order.value();
  if (is_half(nu)) {
    const double s = std::sqrt(2.0 / (kPi * x));
    return s * (std::cosh(x) - std::sinh(x) / (2.0 * x));
  }
  return std::cyl_bessel_i(nu + 1.0, x) + nu / x * std::cyl_bessel_i(nu, x);
}

ScaledValue bessel_i_scaled(BesselOrder order, double x) {
  require_positive(x, "bessel_i_scaled");
  const double nu = order.value();
  if (x <= 600.0) return {std::exp(-x) * bessel_i(order, x), x};
  // Hankel expansion of e^{-x} I_nu(x); terms decrease fast for x > 600.
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (k * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return {sum / std::sqrt(2.0 * kPi * x), x};
}

ScaledValue bessel_k_scaled(BesselOrder order, double x) {
  require_positive(x, "bessel_k_scaled");
  const double nu = order.value();
  if (x <= 600.0) return {std::exp(x) * k_any(nu, x), -x};
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return {std::sqrt(kPi / (2.0 * x)) * sum, -x};
}

double bessel_k(BesselOrder order, double x) {
  require_positive(x, "bessel_k");
  return k_any(order.value(), x);
}

double bessel_k_prime(BesselOrder order, double x) {
  require_positive(x, "bessel_k_prime");
  const double nu = order.value();
  return -k_any(nu + 1.0, x) + nu / x * k_any(nu, x);
}

double bessel_j_zero(BesselOrder order, int k) {
  if (k < 1) throw std::invalid_argument("bessel_j_zero: k must be >= 1");
  const auto f = [order](double x) { return bessel_j(order, x); };
  const double step = 0.1;
  double a = 1e-3, fa = f(a);
  int found = 0;
  for (double b = a + step;; b += step) {
    const double fb = f(b);
    if (fa * fb < 0.0 && ++found == k) return find_root(f, a, b, {.tol = 1e-15}).root;
    a = b;
    fa = fb;
  }
}

BracketedRoot find_root(const std::function<double(double)>& f, double lo, double hi,
                        RootOptions opts) {
  if (!(lo < hi)) throw std::invalid_argument("find_root: need lo < hi");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return {lo, hi, a, 0.0, 0};
  if (fb == 0.0) return {lo, hi, b, 0.0, 0};
  if (!(fa * fb < 0.0)) throw RootError("find_root: no sign change on bracket");

  double x = 0.0, fx = 0.0;
  int side = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    // The first iterations bisect; afterwards Illinois-modified regula falsi.
    if (it <= 30) {
      x = 0.5 * (a + b);
    } else {
      if (it == 31) {
        fa = f(a);
        fb = f(b);
        side = 0;
      }
      x = (a * fb - b * fa) / (fb - fa);
      if (!(x > a && x < b)) x = 0.5 * (a + b);
    }
    fx = f(x);
    if (std::abs(fx) <= opts.tol || (opts.x_tol > 0.0 && b - a <= opts.x_tol))
      return {lo, hi, x, std::abs(fx), it};
    if (fx * fb < 0.0) {
      a = b;
      fa = fb;
      b = x;
      fb = fx;
      side = 0;
    } else {
      b = x;
      fb = fx;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    if (a > b) {
      std::swap(a, b);
      std::swap(fa, fb);
      side = -side;
    }
    if (std::nextafter(a, b) >= b) {
      const double best = std::abs(fa) < std::abs(fb) ? a : b;
      const double fbest = std::min(std::abs(fa), std::abs(fb));
      // Adjacent doubles: the residual is roundoff-limited unless f jumps here.
      if (fbest <= std::max(opts.tol, 1e-6) || opts.x_tol > 0.0) return {lo, hi, best, fbest, it};
      throw RootError("find_root: bracket collapsed on a discontinuity");
    }
  }
  throw RootError("find_root: iteration limit reached");
}

double golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                       double x_tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > x_tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace growup::specfun
