#pragma once

#include <optional>
#include <stdexcept>
#include <string>

/// Problem parameters, critical exponents and the boundedness/grow-up
/// classifier for u_t = Δu^m + 1_{B_L} u^p.
namespace growup {

struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ProblemParams {
  double m = 1.0;
  double p = 1.0;
  int N = 3;
  double L = 1.0;

  /// Throws InvalidParams unless m, p, L > 0 and N >= 1.
  void validate() const;
  double gamma() const { return p / m; }
  /// Bessel order (N-2)/2.
  double nu() const { return (N - 2) / 2.0; }
};

struct ExponentTable {
  double p0;
  double pF;
  std::optional<double> pS;       // N >= 3 only
  std::optional<double> gamma_S;  // N >= 3 only
  double m_star;
  std::optional<double> L1;       // first zero of J_nu; N >= 2
};

ExponentTable exponents(const ProblemParams& params);

enum class Globality { all_global, blowup_for_large_data, l_dependent_global };

/// Regions of the grow-up diagram below p0.
enum class Region { A, B, C, D, l_dependent };

enum class RateLaw {
  none,
  power_p,      // t^{1/(1-p)}
  power_m,      // t^{1/(1-m)}
  log_power,    // (log t)^{1/(1-p)}
  exp_lambda0,  // e^{λ0 t}
  exp_one,      // e^{t}
  unspecified,  // unbounded, no sharp rate available
};

struct Regime {
  Globality globality;
  Region region;
  /// For region == l_dependent: A (unbounded) or D (bounded) at the given L.
  std::optional<Region> resolved;
  /// Whether solutions are global at the given L (l_dependent_global only).
  std::optional<bool> global_at_L;
  RateLaw rate_law;
  /// L == L*: boundedness additionally requires the far-field decay
  /// limsup |x|^{(N-2)/m} u0 < inf, which is not checked here.
  bool needs_tail_condition = false;
};

/// Requires p <= p0; throws InvalidParams otherwise. L_star is ignored for
/// N <= 2.
Regime classify_regime(const ProblemParams& params, double L_star);

std::string to_string(Globality g);
std::string to_string(Region r);
std::string to_string(RateLaw r);

}  // namespace growup
