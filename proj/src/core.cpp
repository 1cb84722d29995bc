#include "growup/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "growup/specfun.hpp"

namespace growup {

void ProblemParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidParams("m must be positive and finite");
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidParams("p must be positive and finite");
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidParams("L must be positive and finite");
  if (N < 1) throw InvalidParams("N must be >= 1");
}

ExponentTable exponents(const ProblemParams& params) {
  params.validate();
  const double m = params.m;
  const int N = params.N;
  ExponentTable t{};
  if (N == 1) {
    t.p0 = std::max(1.0, (m + 1.0) / 2.0);
    t.pF = m + 1.0;
    t.L1 = std::numbers::pi / 2.0;
  } else {
    t.p0 = t.pF = std::max(1.0, m);
    t.L1 = specfun::bessel_j_zero(specfun::BesselOrder::for_dimension(N), 1);
  }
  if (N >= 3) {
    t.pS = m * (N + 2.0) / (N - 2.0);
    t.gamma_S = (N + 2.0) / (N - 2.0);
  }
  t.m_star = std::max(0, N - 2) / static_cast<double>(N);
  return t;
}

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

RateLaw unbounded_rate(const ProblemParams& pr, const ExponentTable& ex, double L_star) {
  const double m = pr.m, p = pr.p;
  const int N = pr.N;
  if (N == 1) return RateLaw::unspecified;
  if (p == m) {
    if (m < 1.0) return RateLaw::power_m;
    if (m == 1.0) return (N == 2 || pr.L > L_star) ? RateLaw::exp_lambda0 : RateLaw::none;
    return RateLaw::none;
  }
  if (p < m) {
    if (N == 2 && m == 1.0) return RateLaw::log_power;
    return RateLaw::unspecified;
  }
  // m < p <= 1
  if (p < 1.0) {
    if (N == 2 || p < *ex.pS) return RateLaw::power_p;
    return RateLaw::unspecified;
  }
  if (N == 2 || m > (N - 2.0) / (N + 2.0)) return RateLaw::exp_one;
  return RateLaw::unspecified;
}

}  // namespace

Regime classify_regime(const ProblemParams& params, double L_star) {
  const ExponentTable ex = exponents(params);
  const double m = params.m, p = params.p, L = params.L;
  const int N = params.N;
  if (p > ex.p0) throw InvalidParams("classification is defined only for p <= p0");

  Regime r{};
  r.globality = Globality::all_global;
  r.rate_law = RateLaw::none;

  if (N == 1) {
    r.region = Region::A;
    r.rate_law = RateLaw::unspecified;
    return r;
  }

  if (N == 2) {
    r.region = p <= m ? Region::A : Region::B;
    if (p == m && m > 1.0) {
      // L* = 0 in the plane: every L exceeds it.
      r.globality = Globality::l_dependent_global;
      r.global_at_L = false;
      return r;
    }
    r.rate_law = unbounded_rate(params, ex, 0.0);
    return r;
  }

  if (p < m) {
    r.region = Region::D;
    return r;
  }
  if (p == m) {
    const bool bounded = L <= L_star || near(L, L_star);
    r.needs_tail_condition = near(L, L_star);
    if (m > 1.0) {
      r.region = Region::D;
      r.globality = Globality::l_dependent_global;
      r.global_at_L = bounded;
      return r;
    }
    r.region = Region::l_dependent;
    r.resolved = bounded ? Region::D : Region::A;
    r.rate_law = bounded ? RateLaw::none : unbounded_rate(params, ex, L_star);
    return r;
  }
  r.region = Region::C;
  r.rate_law = unbounded_rate(params, ex, L_star);
  return r;
}

std::string to_string(Globality g) {
  switch (g) {
    case Globality::all_global: return "all-global";
    case Globality::blowup_for_large_data: return "blowup-for-large-data";
    case Globality::l_dependent_global: return "L-dependent-global";
  }
  return "?";
}

std::string to_string(Region r) {
  switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::D: return "D";
    case Region::l_dependent: return "L-dependent";
  }
  return "?";
}

std::string to_string(RateLaw r) {
  switch (r) {
    case RateLaw::none: return "none";
    case RateLaw::power_p: return "t^(1/(1-p))";
    case RateLaw::power_m: return "t^(1/(1-m))";
    case RateLaw::log_power: return "(log t)^(1/(1-p))";
    case RateLaw::exp_lambda0: return "exp(lambda0 t)";
    case RateLaw::exp_one: return "exp(t)";
    case RateLaw::unspecified: return "unspecified";
  }
  return "?";
}

}  // namespace growup
