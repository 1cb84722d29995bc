#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "doctest.h"
#include "growup/selfsim.hpp"

using namespace growup::selfsim;

namespace {

SimilarityExponents exponents_for(SolutionType type, double m, int N) {
  const double alpha = type == SolutionType::I ? 2.0 / (1.0 - m) : 1.0;
  return {alpha, beta_for(type, alpha, m), m, N};
}

const Trajectory& orbit(SolutionType type, double m, int N) {
  static std::map<std::tuple<int, double, int>, Trajectory> cache;
  const auto key = std::make_tuple(static_cast<int>(type), m, N);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, separatrix(exponents_for(type, m, N))).first;
  return it->second;
}

struct Case {
  SolutionType type;
  double m;
  int N;
};

const Case kCases[] = {
    {SolutionType::I, 0.6, 2},  {SolutionType::I, 0.6, 3},  {SolutionType::I, 0.8, 2},
    {SolutionType::I, 0.8, 3},  {SolutionType::II, 0.6, 2}, {SolutionType::II, 0.6, 3},
    {SolutionType::II, 0.8, 2}, {SolutionType::II, 0.8, 3},
};

// Residual of Δ(f^m) - α f - β ξ f' at the stored node nearest ξ, with
// fourth-order differences in η = log ξ on the node grid:
// Δg = ξ^{-2} (g_ηη + (N-2) g_η), ξ f' = f_η.
double profile_residual(const SelfSimilarProfile& p, double xi) {
  const auto& e = p.exponents;
  const auto s = p.samples();
  const double h = std::log(s[1].first / s[0].first);
  const auto i = static_cast<std::size_t>(std::round(std::log(xi / s[0].first) / h));
  double f[5], g[5];
  for (int k = 0; k < 5; ++k) {
    f[k] = s[i + k - 2].second;
    g[k] = std::pow(f[k], e.m);
  }
  const double x = s[i].first;
  const double d1g = (g[0] - 8 * g[1] + 8 * g[3] - g[4]) / (12 * h);
  const double d2g = (-g[0] + 16 * g[1] - 30 * g[2] + 16 * g[3] - g[4]) / (12 * h * h);
  const double d1f = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
  const double lap = (d2g + (e.N - 2) * d1g) / (x * x);
  const double rhs = e.alpha * f[2] + e.beta * d1f;
  return std::abs(lap - rhs) / std::max(std::abs(rhs), 1e-300);
}

}  // namespace

TEST_CASE("B and C are zeros of the field") {
  for (const Case& c : kCases) {
    const SimilarityExponents e = exponents_for(c.type, c.m, c.N);
    const auto b = phase_field(point_B(e), e);
    CHECK(b.first == doctest::Approx(0.0));
    CHECK(b.second == 0.0);
    if (c.type == SolutionType::I) {
      const PhasePoint C = point_C(e);
      const auto f = phase_field(C, e);
      CHECK(std::abs(f.first) < 1e-12 * C.Y);
      CHECK(std::abs(f.second) < 1e-12 * C.Y);
    } else {
      CHECK_THROWS_AS(point_C(e), std::domain_error);
    }
  }
}

TEST_CASE("C for N = 2, m = 1/2, α = 4, β = 1/2") {
  const SimilarityExponents e{4.0, 0.5, 0.5, 2};
  CHECK(e.delta() == doctest::Approx(1.0));
  const PhasePoint C = point_C(e);
  CHECK(C.X == doctest::Approx(-4.0));
  CHECK(C.Y == doctest::Approx(4.0));
}

TEST_CASE("invalid exponents are rejected") {
  CHECK_THROWS_AS(separatrix({1.0, 0.1, 0.2, 3}), std::domain_error);
  CHECK_THROWS_AS(separatrix({1.0, 0.1, 1.0, 3}), std::domain_error);
  CHECK_THROWS_AS(separatrix({1.0, 0.4, 0.6, 3}), std::domain_error);
  CHECK(beta_for(SolutionType::I, 5.0, 0.6) == doctest::Approx(0.5));
  CHECK(beta_for(SolutionType::II, 1.0, 0.6) == doctest::Approx(0.2));
}

TEST_CASE("orbit stays in the invariant region with Y increasing") {
  for (const Case& c : kCases) {
    const Trajectory& t = orbit(c.type, c.m, c.N);
    const auto& e = t.exponents;
    const double xc = -2.0 / (1.0 - c.m), xb = point_B(e).X;
    const double y_cap = c.type == SolutionType::I ? point_C(e).Y : INFINITY;
    CAPTURE(c.m);
    CAPTURE(c.N);
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      const auto& q = t.points[i];
      CHECK(q.X >= xc - 1e-6);
      CHECK(q.X <= std::max(xb, 0.0) + 1e-6);
      CHECK(q.Y <= y_cap * (1 + 1e-6));
      if (i > 0) CHECK(q.logY > t.points[i - 1].logY);
    }
    CHECK(t.richardson_change < 1e-6);
  }
}

TEST_CASE("near-origin and far-field exponents") {
  for (const Case& c : kCases) {
    const SelfSimilarProfile p = reconstruct_profile(orbit(c.type, c.m, c.N), 1.0);
    CAPTURE(c.m);
    CAPTURE(c.N);
    const double far = -2.0 / (1.0 - c.m);
    CHECK(p.far_exponent == doctest::Approx(far).epsilon(0.02));
    if (c.N == 2)
      CHECK(std::abs(p.near_exponent) < 0.02);
    else
      CHECK(p.near_exponent == doctest::Approx(-(c.N - 2) / c.m).epsilon(0.02));
  }
}

TEST_CASE("normalization") {
  for (const Case& c : kCases) {
    const SelfSimilarProfile p = reconstruct_profile(orbit(c.type, c.m, c.N), 1.0);
    if (c.N == 2) {
      CHECK(p.eval(1.0).f == doctest::Approx(1.0).epsilon(1e-8));
    } else {
      const double xi = p.xi_min() * 10;
      CHECK(std::pow(xi, (c.N - 2) / c.m) * p.eval(xi).f == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("N = 2 profile grows like |log ξ|^{1/m} at the origin") {
  const SelfSimilarProfile p = reconstruct_profile(orbit(SolutionType::I, 0.6, 2), 1.0);
  const double a = 1e-60, b = 1e-120;
  const double ratio = p.eval(b).f / p.eval(a).f;
  CHECK(ratio == doctest::Approx(std::pow(2.0, 1.0 / 0.6)).epsilon(0.02));
}

TEST_CASE("type II log-corrected tail is flat over [1e2, 1e4]") {
  for (const Case& c : kCases) {
    if (c.type != SolutionType::II) continue;
    const SelfSimilarProfile p = reconstruct_profile(orbit(c.type, c.m, c.N), 1.0);
    CAPTURE(c.m);
    CAPTURE(c.N);
    REQUIRE(p.log_ratio_variation);
    CHECK(*p.log_ratio_variation < 0.10);
  }
}

TEST_CASE("profiles solve the similarity ODE, also after μ-scaling") {
  for (const Case& c : kCases) {
    const Trajectory& t = orbit(c.type, c.m, c.N);
    for (double mu : {1.0, 2.5}) {
      const SelfSimilarProfile p = reconstruct_profile(t, mu);
      CAPTURE(c.m);
      CAPTURE(c.N);
      CAPTURE(mu);
      for (double xi : {0.3, 1.0, 4.0, 20.0}) CHECK(profile_residual(p, xi) < 1e-5);
    }
  }
}

TEST_CASE("μ-family is the exact rescaling") {
  const Trajectory& t = orbit(SolutionType::I, 0.6, 3);
  const SelfSimilarProfile p1 = reconstruct_profile(t, 1.0);
  for (double mu : {0.3, 3.0}) {
    const SelfSimilarProfile pm = reconstruct_profile(t, mu);
    for (double xi : {0.01, 0.5, 2.0, 50.0}) {
      const double ref = std::pow(mu, 2.0 / (1.0 - 0.6)) * p1.eval(mu * xi).f;
      CHECK(pm.eval(xi).f == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("U scaling identity and time monotonicity") {
  for (const Case& c : kCases) {
    const SelfSimilarProfile p = reconstruct_profile(orbit(c.type, c.m, c.N), 1.0);
    const auto& e = p.exponents;
    for (double r : {0.2, 1.0, 5.0}) {
      for (double t : {0.5, 1.0, 2.0}) {
        const double u = evaluate_U(p, r, t);
        if (c.type == SolutionType::I)
          CHECK(u == doctest::Approx(std::pow(t, e.alpha) * evaluate_U(p, r * std::pow(t, e.beta), 1.0)).epsilon(1e-10));
        else
          CHECK(u == doctest::Approx(std::exp(e.alpha * t) * evaluate_U(p, r * std::exp(e.beta * t), 0.0)).epsilon(1e-10));
        const double dt = 1e-4 * t;
        CHECK(evaluate_U(p, r, t + dt) >= evaluate_U(p, r, t - dt));
      }
    }
    for (const auto& [xi, f] : p.samples()) {
      if (xi < 1e-6 || xi > 1e8) continue;
      CHECK(e.alpha * f + e.beta * f * p.X_at(xi) >= 0);
    }
  }
}

TEST_CASE("U solves u_t = Δu^m") {
  const SelfSimilarProfile p = reconstruct_profile(orbit(SolutionType::I, 0.6, 3), 1.0);
  const double m = 0.6;
  for (double r : {0.5, 2.0}) {
    const double t = 1.0, h = 1e-3, k = 1e-5;
    const double ut = (evaluate_U(p, r, t + k) - evaluate_U(p, r, t - k)) / (2 * k);
    const auto g = [&](double s) { return std::pow(evaluate_U(p, s, t), m); };
    const double lap = (g(r + h) - 2 * g(r) + g(r - h)) / (h * h) + 2 / r * (g(r + h) - g(r - h)) / (2 * h);
    CHECK(ut == doctest::Approx(lap).epsilon(1e-5));
  }
  CHECK_THROWS_AS(evaluate_U(p, 1.0, 0.0), std::domain_error);
}

TEST_CASE("CSV exports") {
  const Trajectory& t = orbit(SolutionType::I, 0.8, 3);
  CHECK(trajectory_csv(t).rfind("eta,X,Y\r\n", 0) == 0);
  CHECK(profile_csv(reconstruct_profile(t, 1.0)).rfind("xi,f\r\n", 0) == 0);
}
