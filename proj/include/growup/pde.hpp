#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "growup/core.hpp"

/// Radial solver for u_t = Δu^m + a(r) u^p on [0, R_max], a = 1_{r<L}.
namespace growup::pde {

/// Nodes 0 = r_0 < ... < r_M = R_max with finite-volume cells around each
/// node: faces at midpoints, exact volumes ∫ r^{N-1} dr.
class RadialGrid {
 public:
  static RadialGrid uniform(int N, double R_max, int M);
  /// Spacing h up to r_uniform, then growing geometrically by `growth` per
  /// cell until R_max (the last cell is shortened to land on R_max).
  static RadialGrid stretched(int N, double h, double r_uniform, double growth, double R_max);

  int N() const { return N_; }
  std::size_t size() const { return r_.size(); }
  const std::vector<double>& r() const { return r_; }
  double R_max() const { return r_.back(); }
  double h_min() const;
  bool is_uniform() const { return uniform_; }
  /// Face i sits between nodes i and i+1.
  double face_radius(std::size_t i) const { return rf_[i]; }
  double face_area(std::size_t i) const { return af_[i]; }  // r_{i+1/2}^{N-1}
  double volume(std::size_t i) const { return vol_[i]; }    // ∫ over the cell of r^{N-1} dr
  /// Fraction of cell i inside B_L, by volume.
  double ball_fraction(std::size_t i, double L) const;
  /// |S^{N-1}|.
  double sphere_area() const;
  /// Linear interpolation of nodal values at radius r.
  double interpolate(const std::vector<double>& u, double r) const;

 private:
  explicit RadialGrid(int N, std::vector<double> r, bool uniform);
  int N_;
  std::vector<double> r_, rf_, af_, vol_;
  bool uniform_;
};

enum class Boundary { dirichlet_zero, flat_bound, zero_flux };
enum class Reaction { localized, none, everywhere };
enum class Outcome { bounded, grow_up, blow_up, inconclusive };

struct Policy {
  double blowup_threshold = 1e12;
  /// Bounded when the sup norm varies by less than this over the last decade of time.
  double plateau_tolerance = 0.01;
};

struct SimulationConfig {
  double t_max = 1.0;
  Boundary boundary = Boundary::dirichlet_zero;
  Reaction reaction = Reaction::localized;
  /// dt <= cfl / max_i (diffusive rate of node i); 0.8 keeps the update monotone.
  double cfl = 0.8;
  /// Relative change of u from reaction per step.
  double reaction_cfl = 0.05;
  double dt_max = std::numeric_limits<double>::infinity();
  /// Step collapse below dt_min * max(1, t) ends the run.
  double dt_min = 1e-28;
  long max_steps = 2'000'000'000L;
  /// Output times: 0, then log-spaced from t_first_output to t_max.
  double t_first_output = 1e-2;
  int outputs_per_decade = 20;
  /// Extra output whenever the sup norm has grown by this factor.
  double growth_trigger = 1.5;
  std::vector<double> trace_radii;
  bool keep_snapshots = true;
  Policy policy;
};

struct Snapshot {
  double t;
  std::vector<double> u;
  double dt_used;
};

struct SeriesPoint {
  double t;
  double sup;
};

struct SimulationRun {
  ProblemParams params;
  RadialGrid grid;
  SimulationConfig config;
  std::vector<Snapshot> snapshots;  // at the output times when keep_snapshots
  std::vector<SeriesPoint> sup_series;
  /// traces[j][k] = u(trace_radii[j], sup_series[k].t)
  std::vector<std::vector<double>> traces;
  double sup0 = 0.0;
  long steps = 0;
  bool threshold_crossed = false;
  bool step_collapse = false;
  std::optional<double> T_estimate;
  /// p < 1 with u0 not strictly positive on the closed ball.
  bool non_unique_regime = false;
  /// Sup norm nondecreasing along the run.
  bool monotone = true;
  Outcome outcome = Outcome::inconclusive;
};

using InitialData = std::function<double(double)>;

/// Throws InvalidParams for bad parameters or data (negative or non-finite
/// values), std::invalid_argument for R_max <= 2L with localized reaction.
SimulationRun simulate(const ProblemParams& params, const InitialData& u0, const RadialGrid& grid,
                       const SimulationConfig& config);

/// Solution of U' = U^p, U(0) = M.
double flat_bound(double M, double p, double t);

/// ½∫|∇u^m|² - m/(m+p) ∫ a u^{m+p} over R^N (equal to ½∫|∇w^m|² - ½∫ a w^{2m} when p = m).
double lyapunov_energy(const std::vector<double>& u, const ProblemParams& params, const RadialGrid& grid,
                       Reaction reaction = Reaction::localized);

/// ∫ u dx over R^N.
double mass(const std::vector<double>& u, const RadialGrid& grid);

struct MassReport {
  std::vector<double> t, J, dJ;
  double exponent;                 // 2m/(m+1)
  std::optional<double> t0;        // J' > 0 at every sample from t0 on
  std::optional<double> C;         // smallest C with J' >= C J^exponent after t0
  std::optional<double> C_fit;     // least squares of log J' - exponent log J after t0
  std::optional<double> T_bound;      // from C: an upper bound for the blow-up time
  std::optional<double> T_predicted;  // from C_fit; both need exponent > 1
  std::string conclusion;
};

/// J = 1/(m+1) ∫ u^{m+1} over the snapshots, J' by central differences
/// (first and last snapshot excluded).
MassReport mass_functional(const SimulationRun& run);

struct KaplanReport {
  double lambda1;
  std::vector<double> t, J;
  double threshold;        // λ1^{1/(p-m)}, p > m only
  bool above_threshold;    // J(0) > threshold
};

/// First Dirichlet eigenfunction of B_L with ∫_{B_L} φ = 1, as (λ1, φ(r)).
std::pair<double, std::function<double(double)>> dirichlet_eigenpair(double L, int N);

KaplanReport kaplan_functional(const SimulationRun& run, double L);

/// Outcome from the sup-norm series and the policy.
Outcome classify_outcome(const SimulationRun& run, const Policy& policy);

std::string to_string(Outcome o);
std::string to_string(Boundary b);
std::string to_string(Reaction r);

/// t, sup_norm, then one column u_r=<radius> per trace.
std::string series_csv(const SimulationRun& run);
/// t, r, u for every snapshot.
std::string snapshots_csv(const SimulationRun& run);

/// The discrete right-hand side at every node (boundary node included as 0).
std::vector<double> discrete_rhs(const std::vector<double>& u, const ProblemParams& params,
                                 const RadialGrid& grid, Reaction reaction, Boundary boundary);

}  // namespace growup::pde
