#include <cmath>
#include <numbers>

#include <boost/math/special_functions/expint.hpp>

#include "doctest.h"
#include "growup/rates.hpp"

using namespace growup;
using namespace growup::rates;

namespace {

Series sample(double t0, double t1, int n, bool log_spaced, const std::function<double(double)>& u) {
  Series s;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1);
    const double t = log_spaced ? t0 * std::pow(t1 / t0, x) : t0 + (t1 - t0) * x;
    s.emplace_back(t, u(t));
  }
  return s;
}

// ∫_1^t (1 - e^{-L²/(t-s)}) ds = L² [(1 - e^{-z0})/z0 + E1(z0)], z0 = L²/(t-1), by parts.
double unit_convolution(double L, double t) {
  const double z0 = L * L / (t - 1);
  return L * L * (-std::expm1(-z0) / z0 + boost::math::expint(1, z0));
}

}  // namespace

TEST_CASE("power fits") {
  const Series exact = sample(1, 1e4, 50, true, [](double t) { return t * t; });
  const RateFit f = fit_power(exact);
  CHECK(f.parameter == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.goodness < 1e-12);
  CHECK(f.window.t_a == doctest::Approx(std::pow(10.0, 0.8)));
  CHECK(f.window.t_b == 1e4);

  const Series perturbed = sample(1e2, 1e4, 60, true, [](double t) { return t * t * (1 + 1 / t); });
  CHECK(fit_power(perturbed, Window{1e2, 1e4}).parameter == doctest::Approx(2.0).epsilon(0.01));
  CHECK_THROWS_AS(fit_power(exact, Window{100, 900}), FitError);
  CHECK_THROWS_AS(fit_power(Series{{1, 1}, {100, 4}}), FitError);
  CHECK_THROWS_AS(fit_power(Series{{1, 1}, {10, 0}, {100, 4}, {1000, 5}}), FitError);
}

TEST_CASE("exponential fits") {
  const Series s = sample(0, 40, 81, false, [](double t) { return 3.0 * std::exp(0.7 * t); });
  const RateFit f = fit_exponential(s);
  CHECK(f.parameter == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));
  CHECK(f.window.t_a == doctest::Approx(8.0));
  CHECK_THROWS_AS(fit_exponential(s, Window{10, 14}), FitError);
}

TEST_CASE("log-power fits") {
  const Series s = sample(1e2, 1e6, 80, true, [](double t) { return std::pow(std::log(t), 3); });
  const RateFit f = fit_logpower(s, Window{1e2, 1e6});
  CHECK(f.parameter == doctest::Approx(3.0).epsilon(0.02));
  CHECK(f.goodness < 1e-10);
  CHECK_THROWS_AS(fit_logpower(s, Window{1e2, 9e4}), FitError);

  const Series power = sample(1e2, 1e6, 80, true, [](double t) { return t * t; });
  CHECK(fit_logpower(power, Window{1e2, 1e6}).goodness > rejection_cut);
  CHECK(fit_power(s, Window{1e2, 1e6}).goodness > rejection_cut);
}

TEST_CASE("model selection picks the generating model") {
  CHECK(select_model(sample(1, 1e6, 100, true, [](double t) { return std::pow(t, 1.5); })).best == Model::power);
  CHECK(select_model(sample(0, 60, 121, false, [](double t) { return std::exp(0.4 * t); })).best ==
        Model::exponential);
  const ModelSelection lp = select_model(sample(1.5, 1e7, 200, true, [](double t) { return std::pow(std::log(t), 2); }));
  CHECK(lp.best == Model::log_power);
  REQUIRE(lp.fits[static_cast<int>(Model::log_power)]);
  CHECK(lp.fits[static_cast<int>(Model::log_power)]->parameter == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(*model_for(RateLaw::power_m) == Model::power);
  CHECK(*model_for(RateLaw::exp_lambda0) == Model::exponential);
  CHECK(*model_for(RateLaw::log_power) == Model::log_power);
  CHECK_FALSE(model_for(RateLaw::none));
  CHECK(to_string(Model::log_power) == "log-power");
}

TEST_CASE("Duhamel exponent sequence") {
  const DuhamelSequence half = duhamel_sequence(0.5, 5, 2.0, 3.0);
  const double d[] = {2, 1, 0.5, 0.25, 0.125};
  const double s[] = {0, 1, 1.5, 1.75, 1.875};
  for (int k = 0; k < 5; ++k) {
    CHECK(half.delta[k] == doctest::Approx(d[k]));
    CHECK(half.sigma[k] == doctest::Approx(s[k]));
  }
  CHECK(half.c[1] == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(half.c_limit == doctest::Approx(4.0));
  for (double p : {0.25, 0.5, 0.9}) {
    const DuhamelSequence q = duhamel_sequence(p, 400, 1.7);
    CHECK(std::abs(q.sigma[99] - 1 / (1 - p)) < (p < 0.9 ? 1e-8 : 1e-3));
    CHECK(std::abs(q.sigma.back() - q.sigma_limit) < 1e-8);
    CHECK(std::abs(q.c.back() - q.c_limit) < 1e-8);
    CHECK(q.delta.back() < 1e-8);
    for (std::size_t k = 1; k < q.sigma.size(); ++k) CHECK(q.sigma[k] >= q.sigma[k - 1]);
  }
  const DuhamelSequence zero = duhamel_sequence(0.0, 6);
  for (std::size_t k = 1; k < zero.sigma.size(); ++k) CHECK(zero.sigma[k] == 1.0);
  CHECK_THROWS_AS(duhamel_sequence(1.0, 4), InvalidParams);
  CHECK_THROWS_AS(duhamel_sequence(0.5, 0), InvalidParams);
}

TEST_CASE("Duhamel convolution of a constant") {
  const std::vector<double> ts = {1.0, 1.5, 10.0, 1e3, 1e6, 1e9};
  for (double L : {0.5, 1.0, 1.2, 3.0}) {
    const std::vector<double> G = duhamel_convolve([](double) { return 1.0; }, 0.7, L, ts);
    CHECK(G[0] == 0.0);
    for (std::size_t i = 1; i < ts.size(); ++i)
      CHECK(G[i] == doctest::Approx(unit_convolution(L, ts[i])).epsilon(1e-9));
  }
  for (double L : {1.1, 1.2, 1.3}) {
    const double G = duhamel_convolve([](double) { return 1.0; }, 0.3, L, {1e6})[0];
    CHECK(G / (L * L * std::log(1e6)) == doctest::Approx(1.0).epsilon(0.03));
  }
  // L'Hôpital limit: the ratio approaches 1 like (1 - γ - log L²)/log t.
  double prev = INFINITY;
  for (double t : {1e4, 1e8, 1e16, 1e32}) {
    const double dev = std::abs(duhamel_convolve([](double) { return 1.0; }, 0.5, 1.0, {t})[0] / std::log(t) - 1);
    CHECK(dev < prev);
    CHECK(dev * std::log(t) == doctest::Approx(1 - std::numbers::egamma).epsilon(1e-3));
    prev = dev;
  }
  CHECK(duhamel_convolve([](double) { return 0.0; }, 0.5, 1.0, {10.0, 100.0}) == std::vector<double>{0.0, 0.0});
  CHECK_THROWS_AS(duhamel_convolve([](double) { return 1.0; }, 0.5, 1.0, {0.5}), InvalidParams);
}

TEST_CASE("one Duhamel step lowers the power and adds a logarithm") {
  const double p = 0.5;
  const DuhamelSequence seq = duhamel_sequence(p, 2);
  std::vector<double> ts;
  for (int i = 0; i <= 60; ++i) ts.push_back(std::pow(10.0, 2 + 8.0 * i / 60));
  const std::vector<double> g2 = duhamel_convolve([p](double t) { return std::pow(t, 1 / (1 - p)); }, p, 1.0, ts);
  Series over_log, over_power;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    over_log.emplace_back(ts[i], g2[i] / std::log(ts[i]));
    over_power.emplace_back(ts[i], g2[i] / std::pow(ts[i], seq.delta[1]));
  }
  CHECK(fit_power(over_log).parameter == doctest::Approx(seq.delta[1]).epsilon(0.02));
  CHECK(fit_logpower(over_power).parameter == doctest::Approx(seq.sigma[1]).epsilon(0.1));
}
