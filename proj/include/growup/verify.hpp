#pragma once

#include <string>
#include <vector>

/// Canned end-to-end checks, one recipe per acceptance criterion.
namespace growup::verify {

struct Check {
  std::string name;
  double value;
  double target;
  double tolerance;  // relative unless `absolute`
  bool absolute;
  bool passed;
};

struct RecipeResult {
  std::string recipe;
  int criterion;  // 0 for recipes outside the numbered list
  std::string statement;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const;
  /// Checks whose name starts with "flat bound".
  std::vector<Check> flat_bound_checks() const;
};

/// Recipe names in criterion order: Lstar, stationary-explicit, eigen-rate,
/// selfsim-asymptotics, dichotomy, rate-pm, rate-logpower, rate-lambda0,
/// rate-outside, properties, duhamel-limits.
std::vector<std::string> recipe_names();

/// Throws std::out_of_range for an unknown name.
RecipeResult run_recipe(const std::string& name);

}  // namespace growup::verify
