#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

/// Self-similar solutions t^α f(r t^β) (type I) and e^{αt} f(r e^{βt})
/// (type II) of u_t = Δu^m, m* < m < 1, via the (X, Y) phase plane
/// X = ξf'/f, Y = ξ² f^{1-m} / m, η = log ξ.
namespace growup::selfsim {

struct PhasePoint {
  double eta;
  double X;
  double Y;
  double logY;  // kept separately: Y underflows near the origin
};

struct SimilarityExponents {
  double alpha;
  double beta;
  double m;
  int N;
  double delta() const { return alpha * (1.0 - m) - 2.0 * beta; }
};

/// (dX/dη, dY/dη).
std::pair<double, double> phase_field(const PhasePoint& pt, const SimilarityExponents& e);

/// Equilibria of the field.
PhasePoint point_B(const SimilarityExponents& e);
/// Only for δ > 0.
PhasePoint point_C(const SimilarityExponents& e);

struct Trajectory {
  SimilarityExponents exponents;
  /// Uniform grid in η (step `step`), increasing; η = 0 is the far-field start.
  std::vector<PhasePoint> points;
  double step;
  /// Change of the normalized orbit when the start displacement is halved.
  double richardson_change;
};

/// The orbit from B (A when N = 2) to C (δ > 0) or to (-2/(1-m), +∞) (δ = 0),
/// computed backward in η from the far-field end: from C displaced along its
/// stable eigenvector for δ > 0, from the quasi-equilibrium
/// X = -2/(1-m) + K0/(βY) at large Y for δ = 0. Throws std::domain_error for
/// invalid exponents and std::runtime_error if the orbit leaves the
/// invariant region.
Trajectory separatrix(const SimilarityExponents& e, double displacement = 1e-8);

enum class SolutionType { I, II };

struct ProfileValue {
  double f;
  bool extrapolated;
};

class SelfSimilarProfile {
 public:
  SimilarityExponents exponents;
  double mu;
  std::optional<SolutionType> type;  // δ = 1 → I, δ = 0 → II
  double near_exponent;              // fitted d log f / d log ξ as ξ → 0
  double far_exponent;               // fitted d log f / d log ξ as ξ → ∞
  bool log_correction;               // δ = 0
  /// max/min - 1 of f ξ^{2/(1-m)} / (log ξ)^{1/(1-m)} over ξ ∈ [1e2, 1e4]; δ = 0 only.
  std::optional<double> log_ratio_variation;

  /// f_μ(ξ) = μ^{2/(1-m)} f(μξ); fitted power tails outside the sampled range.
  ProfileValue eval(double xi) const;
  /// ξ f_μ'(ξ) / f_μ(ξ).
  double X_at(double xi) const;
  double xi_min() const;
  double xi_max() const;
  /// (ξ, f_μ) on the stored log-spaced grid.
  std::vector<std::pair<double, double>> samples() const;

  // Normalized (μ = 1) data on a uniform η grid.
  double eta0;
  double step;
  std::vector<double> logf;
  std::vector<double> X;
};

/// Normalization: ξ^{(N-2)/m} f → 1 as ξ → 0 for N >= 3, f(0) = 1 for N = 1,
/// f(1) = 1 for N = 2 (f grows like |log ξ|^{1/m} at the origin there).
SelfSimilarProfile reconstruct_profile(const Trajectory& traj, double mu);

/// Type I: t^α f(r t^β); type II: e^{αt} f(r e^{βt}).
double evaluate_U(const SelfSimilarProfile& profile, double r, double t);

/// β completing the exponents for a given type: δ = 1 (I) or δ = 0 (II).
double beta_for(SolutionType type, double alpha, double m);

std::string trajectory_csv(const Trajectory& traj);
std::string profile_csv(const SelfSimilarProfile& profile);

}  // namespace growup::selfsim
