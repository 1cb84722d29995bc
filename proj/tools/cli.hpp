#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "growup/core.hpp"
#include "growup/pde.hpp"

namespace growup::cli {

struct GridSpec {
  std::string kind = "uniform";  // uniform | stretched
  double R_max = 10.0;
  int M = 200;
  double h = 0.1;  // stretched only
  double r_uniform = 2.0;
  double growth = 1.05;
};

struct InitialSpec {
  /// constant (value) | gaussian (amplitude, width) | stationary (A, scale) | separated (lambda, scale)
  std::string kind = "gaussian";
  double value = 1.0;
  double amplitude = 1.0;
  double width = 1.0;
  double A = 1.0;
  double lambda = 0.5;
  double scale = 1.0;
};

struct ExperimentConfig {
  ProblemParams params;
  GridSpec grid;
  InitialSpec initial;
  double t_max = 10.0;
  std::string boundary = "dirichlet-zero";
  std::string reaction = "localized";
  std::vector<double> trace_radii;
  int outputs_per_decade = 20;
  double t_first_output = 1e-2;
  double dt_max = std::numeric_limits<double>::infinity();
  double cfl = 0.8;
  double reaction_cfl = 0.05;
  pde::Policy policy;
  std::string output_dir = "run";
};

nlohmann::json to_json(const ExperimentConfig& c);
/// Missing keys keep their defaults; unknown enum strings throw std::invalid_argument.
ExperimentConfig config_from_json(const nlohmann::json& j);

pde::RadialGrid make_grid(const ExperimentConfig& c);
pde::InitialData make_initial(const ExperimentConfig& c);
pde::SimulationConfig make_sim_config(const ExperimentConfig& c);

/// Runs the command line (without the program name). Exit codes: 0 success,
/// 1 failed check or numerical failure, 2 usage or configuration error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace growup::cli
