#include "growup/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace growup::rates {
namespace {

double abscissa(Model model, double t) {
  switch (model) {
    case Model::power:
      return std::log(t);
    case Model::exponential:
      return t;
    case Model::log_power:
      return std::log(std::log(t));
  }
  return 0.0;
}

bool admissible(Model model, double t) {
  switch (model) {
    case Model::power:
      return t > 0.0;
    case Model::exponential:
      return true;
    case Model::log_power:
      return t > 1.0;
  }
  return false;
}

void check_span(Model model, const Window& w) {
  bool ok = w.t_b > w.t_a;
  switch (model) {
    case Model::power:
      ok = ok && w.t_a > 0.0 && w.t_b >= 10.0 * w.t_a * (1 - 1e-12);
      break;
    case Model::exponential:
      ok = ok && w.t_b - w.t_a >= 5.0 * (1 - 1e-12);
      break;
    case Model::log_power:
      ok = ok && w.t_a > 1.0 && w.t_b >= 1000.0 * w.t_a * (1 - 1e-12);
      break;
  }
  if (!ok) throw FitError("fit window too short for the " + to_string(model) + " model");
}

}  // namespace

std::string to_string(Model m) {
  switch (m) {
    case Model::power:
      return "power";
    case Model::exponential:
      return "exponential";
    case Model::log_power:
      return "log-power";
  }
  return "?";
}

Window default_window(const Series& series, Model model) {
  double t0 = std::numeric_limits<double>::infinity(), t1 = -t0;
  for (const auto& [t, u] : series) {
    if (!admissible(model, t)) continue;
    t0 = std::min(t0, t);
    t1 = std::max(t1, t);
  }
  if (!(t1 > t0)) throw FitError("series has no usable time range");
  if (model == Model::exponential) return {t0 + 0.2 * (t1 - t0), t1};
  return {std::exp(std::log(t0) + 0.2 * (std::log(t1) - std::log(t0))), t1};
}

RateFit fit(const Series& series, Model model, std::optional<Window> window) {
  const Window w = window ? *window : default_window(series, model);
  check_span(model, w);
  std::vector<double> xs, ys;
  for (const auto& [t, u] : series) {
    if (t < w.t_a || t > w.t_b) continue;
    if (!(u > 0.0) || !std::isfinite(u)) throw FitError("series values must be positive and finite");
    xs.push_back(abscissa(model, t));
    ys.push_back(std::log(u));
  }
  const std::size_t n = xs.size();
  if (n < 3) throw FitError("fewer than 3 points in the fit window");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0)) throw FitError("degenerate fit window");
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double good = 0;
  for (std::size_t i = 0; i < n; ++i) good = std::max(good, std::abs(std::expm1(icpt + slope * xs[i] - ys[i])));
  return {model, slope, icpt, w, good, n};
}

RateFit fit_power(const Series& series, std::optional<Window> window) { return fit(series, Model::power, window); }
RateFit fit_exponential(const Series& series, std::optional<Window> window) {
  return fit(series, Model::exponential, window);
}
RateFit fit_logpower(const Series& series, std::optional<Window> window) {
  return fit(series, Model::log_power, window);
}

ModelSelection select_model(const Series& series) {
  ModelSelection sel{};
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (Model m : {Model::power, Model::exponential, Model::log_power}) {
    try {
      sel.fits[static_cast<int>(m)] = fit(series, m);
    } catch (const FitError&) {
      continue;
    }
    const double g = sel.fits[static_cast<int>(m)]->goodness;
    if (!any || g < best) {
      best = g;
      sel.best = m;
      any = true;
    }
  }
  if (!any) throw FitError("no model can be fitted to the series");
  return sel;
}

std::optional<Model> model_for(RateLaw law) {
  switch (law) {
    case RateLaw::power_p:
    case RateLaw::power_m:
      return Model::power;
    case RateLaw::log_power:
      return Model::log_power;
    case RateLaw::exp_lambda0:
    case RateLaw::exp_one:
      return Model::exponential;
    default:
      return std::nullopt;
  }
}

DuhamelSequence duhamel_sequence(double p, int k_max, double cL2, double c1) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidParams("duhamel_sequence: need 0 <= p < 1");
  if (k_max < 1) throw InvalidParams("duhamel_sequence: need k_max >= 1");
  DuhamelSequence s{p, {1.0 / (1.0 - p)}, {0.0}, {c1}, 0.0, 1.0 / (1.0 - p), std::pow(cL2, 1.0 / (1.0 - p))};
  for (int k = 1; k < k_max; ++k) {
    s.delta.push_back(p * s.delta.back());
    s.sigma.push_back(p * s.sigma.back() + 1.0);
    s.c.push_back(cL2 * std::pow(s.c.back(), p));
  }
  return s;
}

std::vector<double> duhamel_convolve(const std::function<double(double)>& g, double p, double L,
                                     const std::vector<double>& t_grid, double c) {
  if (!(L > 0.0) || !(p >= 0.0)) throw InvalidParams("duhamel_convolve: need L > 0, p >= 0");
  using boost::math::quadrature::gauss_kronrod;
  const double L2 = L * L;
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t >= 1.0)) throw InvalidParams("duhamel_convolve: times must be >= 1");
    if (t == 1.0) {
      out.push_back(0.0);
      continue;
    }
    // z = L²/(t-s), y = log z: ∫ g^p(t - L²/z) (1 - e^{-z}) L²/z dy over y > log(L²/(t-1)).
    const auto f = [&](double y) {
      const double z = std::exp(y);
      const double s = std::max(1.0, t - L2 / z);
      const double gs = g(s);
      if (gs <= 0.0) return 0.0;
      return std::pow(gs, p) * (-std::expm1(-z)) * L2 / z;
    };
    const double y0 = std::log(L2 / (t - 1.0));
    const double y_end = std::max(y0, 0.0) + 45.0;
    double total = 0.0;
    if (y0 < 0.0) total += gauss_kronrod<double, 61>::integrate(f, y0, 0.0, 15, 1e-12);
    total += gauss_kronrod<double, 61>::integrate(f, std::max(y0, 0.0), y_end, 15, 1e-12);
    out.push_back(c * total);
  }
  return out;
}

}  // namespace growup::rates
