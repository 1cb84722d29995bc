#include <cmath>
#include <numbers>

#include "doctest.h"
#include "growup/core.hpp"

using namespace growup;

TEST_CASE("exponent table") {
  const auto a = exponents({.m = 2, .p = 1, .N = 3, .L = 1});
  CHECK(a.p0 == 2.0);
  CHECK(a.pF == 2.0);
  REQUIRE(a.pS);
  CHECK(*a.pS == doctest::Approx(10.0));
  CHECK(*a.gamma_S == doctest::Approx(5.0));
  CHECK(a.m_star == doctest::Approx(1.0 / 3));
  CHECK(*a.L1 == doctest::Approx(std::numbers::pi).epsilon(1e-12));

  const auto b = exponents({.m = 1, .p = 1, .N = 2, .L = 1});
  CHECK(b.p0 == 1.0);
  CHECK(b.pF == 1.0);
  CHECK_FALSE(b.pS);
  CHECK_FALSE(b.gamma_S);
  CHECK(b.m_star == 0.0);

  const auto c = exponents({.m = 0.5, .p = 1, .N = 1, .L = 1});
  CHECK(c.p0 == 1.0);
  CHECK(c.pF == 1.5);
  CHECK(exponents({.m = 3, .p = 1, .N = 1, .L = 1}).p0 == 2.0);
}

TEST_CASE("exponents are scale free") {
  const auto a = exponents({.m = 0.7, .p = 0.2, .N = 4, .L = 0.1});
  const auto b = exponents({.m = 0.7, .p = 0.9, .N = 4, .L = 50});
  CHECK(a.p0 == b.p0);
  CHECK(*a.pS == *b.pS);
}

TEST_CASE("Sobolev exponent above p0 for m above (N-2)/(N+2)") {
  for (int N = 3; N <= 8; ++N)
    for (double m = (N - 2.0) / (N + 2.0) + 1e-3; m < 4; m += 0.05) {
      const auto e = exponents({.m = m, .p = 1, .N = N, .L = 1});
      CHECK(*e.pS > e.p0);
    }
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(exponents({.m = 0, .p = 1, .N = 3, .L = 1}), InvalidParams);
  CHECK_THROWS_AS(exponents({.m = 1, .p = -1, .N = 3, .L = 1}), InvalidParams);
  CHECK_THROWS_AS(exponents({.m = 1, .p = 1, .N = 0, .L = 1}), InvalidParams);
  CHECK_THROWS_AS(exponents({.m = 1, .p = 1, .N = 3, .L = 0}), InvalidParams);
  CHECK_THROWS_AS(classify_regime({.m = 0.5, .p = 1.2, .N = 3, .L = 1}, 1.0), InvalidParams);
}

TEST_CASE("regime examples") {
  const double Ls = std::numbers::pi / 2;
  const auto r = classify_regime({.m = 1, .p = 1, .N = 3, .L = 2}, Ls);
  CHECK(r.region == Region::l_dependent);
  CHECK(r.resolved == Region::A);
  CHECK(r.rate_law == RateLaw::exp_lambda0);

  const auto below = classify_regime({.m = 1, .p = 1, .N = 3, .L = 1.2}, Ls);
  CHECK(below.resolved == Region::D);
  CHECK(below.rate_law == RateLaw::none);

  const auto n2 = classify_regime({.m = 1, .p = 0.5, .N = 2, .L = 1}, 0);
  CHECK(n2.region == Region::A);
  CHECK(n2.rate_law == RateLaw::log_power);
  CHECK(classify_regime({.m = 1.5, .p = 1, .N = 2, .L = 1}, 0).rate_law == RateLaw::unspecified);

  const auto d = classify_regime({.m = 1, .p = 0.5, .N = 3, .L = 1}, Ls);
  CHECK(d.region == Region::D);
  CHECK(d.rate_law == RateLaw::none);
  CHECK(classify_regime({.m = 0.5, .p = 0.4, .N = 3, .L = 9}, Ls).region == Region::D);
}

TEST_CASE("regime: open plane case and critical exponent") {
  CHECK(classify_regime({.m = 0.5, .p = 0.7, .N = 2, .L = 1}, 0).region == Region::B);
  const auto p0 = classify_regime({.m = 0.5, .p = 1, .N = 2, .L = 1}, 0);
  CHECK(p0.region == Region::B);
  CHECK(p0.rate_law == RateLaw::exp_one);
  CHECK(p0.globality == Globality::all_global);

  const auto pm2 = classify_regime({.m = 2, .p = 2, .N = 2, .L = 1}, 0);
  CHECK(pm2.globality == Globality::l_dependent_global);
  CHECK(pm2.global_at_L == false);

  const auto pm3 = classify_regime({.m = 2, .p = 2, .N = 3, .L = 1}, std::numbers::pi / 2);
  CHECK(pm3.global_at_L == true);
  CHECK(pm3.region == Region::D);
  CHECK(classify_regime({.m = 2, .p = 2, .N = 3, .L = 2}, std::numbers::pi / 2).global_at_L == false);
}

TEST_CASE("regime: rate laws above m") {
  CHECK(classify_regime({.m = 0.5, .p = 0.7, .N = 3, .L = 1}, 1.57).rate_law == RateLaw::power_p);
  // p_S = 0.1 * 5 = 0.5 for m = 0.1, N = 3
  CHECK(classify_regime({.m = 0.1, .p = 0.7, .N = 3, .L = 1}, 1.57).rate_law == RateLaw::unspecified);
  CHECK(classify_regime({.m = 0.5, .p = 1, .N = 3, .L = 1}, 1.57).rate_law == RateLaw::exp_one);
  CHECK(classify_regime({.m = 0.1, .p = 1, .N = 3, .L = 1}, 1.57).rate_law == RateLaw::unspecified);
  CHECK(classify_regime({.m = 0.5, .p = 0.5, .N = 3, .L = 2}, 1.57).rate_law == RateLaw::power_m);
  CHECK(classify_regime({.m = 0.5, .p = 0.5, .N = 2, .L = 2}, 0).rate_law == RateLaw::power_m);
}

TEST_CASE("regime partitions the unit grid in every dimension") {
  for (int N : {1, 2, 3, 4}) {
    int labelled = 0;
    for (int i = 1; i <= 100; ++i) {
      for (int j = 1; j <= 100; ++j) {
        const double m = i / 50.0, p = j / 50.0;
        const ProblemParams pr{.m = m, .p = p, .N = N, .L = 1.7};
        if (p > exponents(pr).p0) {
          CHECK_THROWS_AS(classify_regime(pr, 1.5), InvalidParams);
          continue;
        }
        const Regime r = classify_regime(pr, 1.5);
        ++labelled;
        if (N == 1) CHECK(r.region == Region::A);
        if (N == 2) CHECK(r.region == (p <= m ? Region::A : Region::B));
        if (N >= 3) {
          if (p < m) CHECK(r.region == Region::D);
          if (p > m) CHECK(r.region == Region::C);
          if (p == m && m <= 1) CHECK(r.region == Region::l_dependent);
        }
      }
    }
    CHECK(labelled > 0);
  }
}

TEST_CASE("label flips at the critical length") {
  const double Ls = 1.5707963267948966;
  for (double m : {0.4, 0.8, 1.0}) {
    const auto lo = classify_regime({.m = m, .p = m, .N = 3, .L = Ls - 1e-3}, Ls);
    const auto hi = classify_regime({.m = m, .p = m, .N = 3, .L = Ls + 1e-3}, Ls);
    CHECK(lo.resolved == Region::D);
    CHECK(hi.resolved == Region::A);
    const auto at = classify_regime({.m = m, .p = m, .N = 3, .L = Ls}, Ls);
    CHECK(at.resolved == Region::D);
    CHECK(at.needs_tail_condition);
    CHECK_FALSE(lo.needs_tail_condition);
  }
}
