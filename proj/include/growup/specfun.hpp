#pragma once

#include <functional>
#include <stdexcept>
#include <string>

/// Bessel functions of integer and half-integer order and a bracketed
/// scalar root finder shared by every matching condition.
namespace growup::specfun {

/// Order nu = k/2, k >= 0 integer.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  /// nu = (N-2)/2; valid for N >= 2.
  static BesselOrder for_dimension(int N);

  double value() const { return nu_; }
  bool half_integer() const { return half_; }

 private:
  double nu_;
  bool half_;
};

double bessel_j(BesselOrder nu, double x);
double bessel_j_prime(BesselOrder nu, double x);
double bessel_i(BesselOrder nu, double x);
double bessel_i_prime(BesselOrder nu, double x);
double bessel_k(BesselOrder nu, double x);
double bessel_k_prime(BesselOrder nu, double x);

/// mantissa * exp(exponent)
struct ScaledValue {
  double mantissa;
  double exponent;
};

/// I_nu(x) as e^{-x} I_nu(x) times e^{x}; usable where I_nu itself overflows.
ScaledValue bessel_i_scaled(BesselOrder nu, double x);
/// K_nu(x) as e^{x} K_nu(x) times e^{-x}; usable where K_nu underflows.
ScaledValue bessel_k_scaled(BesselOrder nu, double x);

/// k-th positive zero of J_nu (k >= 1).
double bessel_j_zero(BesselOrder nu, int k);

struct RootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BracketedRoot {
  double lo;
  double hi;
  double root;
  double residual;
  int iterations;
};

struct RootOptions {
  double tol = 1e-12;     ///< |f(root)| target
  double x_tol = 0.0;     ///< optional bracket-width target (0: 4 ulp)
  int max_iterations = 400;
};

/// Bisection to a narrow bracket followed by secant polishing that is never
/// allowed to leave the bracket. Throws RootError when f(lo), f(hi) share a
/// sign or the iteration budget is exhausted before |f| <= tol.
BracketedRoot find_root(const std::function<double(double)>& f, double lo, double hi,
                        RootOptions opts = {});

/// Golden-section maximization on [lo, hi]; returns the maximizing abscissa.
double golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                       double x_tol = 1e-12);

}  // namespace growup::specfun
