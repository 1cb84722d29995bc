#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "growup/core.hpp"

/// Rate extraction from (t, u) series and the Duhamel iteration for m = 1, N = 2.
namespace growup::rates {

using Series = std::vector<std::pair<double, double>>;

enum class Model { power, exponential, log_power };

struct FitError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Window {
  double t_a;
  double t_b;
};

struct RateFit {
  Model model;
  /// σ in t^σ or (log t)^σ, λ in e^{λt}.
  double parameter;
  double intercept;  // log of the prefactor
  Window window;
  /// max |u_fit/u - 1| over the window.
  double goodness;
  std::size_t points;
};

/// Goodness above this rejects a model.
inline constexpr double rejection_cut = 0.05;

/// Drops the first 20% of the time range: in log t for power and log-power
/// fits, in t for exponential fits. Log-power ranges start after t = 1.
Window default_window(const Series& series, Model model);

/// Least squares of log u against log t, t, or log log t. Throws FitError for
/// windows shorter than a decade (power), 5 time units (exponential), three
/// decades (log-power), with fewer than 3 points, or for non-positive data.
RateFit fit_power(const Series& series, std::optional<Window> window = std::nullopt);
RateFit fit_exponential(const Series& series, std::optional<Window> window = std::nullopt);
RateFit fit_logpower(const Series& series, std::optional<Window> window = std::nullopt);
RateFit fit(const Series& series, Model model, std::optional<Window> window = std::nullopt);

struct ModelSelection {
  /// Indexed by Model; nullopt when the series cannot support that fit.
  std::optional<RateFit> fits[3];
  Model best;
};

/// Fits all three models on their default windows; best has the smallest goodness.
ModelSelection select_model(const Series& series);

/// Fit model matching a predicted rate law; nullopt for none/unspecified.
std::optional<Model> model_for(RateLaw law);

std::string to_string(Model m);

struct DuhamelSequence {
  double p;
  std::vector<double> delta, sigma, c;
  double delta_limit, sigma_limit, c_limit;
};

/// δ_{k+1} = pδ_k, σ_{k+1} = pσ_k + 1, c_{k+1} = cL² c_k^p from δ_1 = 1/(1-p),
/// σ_1 = 0, c_1 = c1. Requires 0 <= p < 1, k_max >= 1.
DuhamelSequence duhamel_sequence(double p, int k_max, double cL2 = 1.0, double c1 = 1.0);

/// c ∫_1^t g^p(s) (1 - e^{-L²/(t-s)}) ds at every t in t_grid (t >= 1).
std::vector<double> duhamel_convolve(const std::function<double(double)>& g, double p, double L,
                                     const std::vector<double>& t_grid, double c = 1.0);

}  // namespace growup::rates
