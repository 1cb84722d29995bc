#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "growup/core.hpp"

/// Radial stationary solutions w = u^m: the inner Lane-Emden type profile,
/// its matching to the harmonic far field, the critical length L*, and
/// Dirichlet solutions in a ball.
namespace growup::stationary {

struct InnerSample {
  double r;
  double v;
  double dv;
};

/// Solution of v'' + (N-1)/r v' + v^gamma = 0, v(0) = 1, v'(0) = 0.
class InnerProfile {
 public:
  double gamma() const { return gamma_; }
  int N() const { return N_; }
  /// First zero of v; empty when v stays positive up to r_end().
  std::optional<double> r0() const { return r0_; }
  double r_end() const { return r_end_; }
  const std::vector<InnerSample>& samples() const { return samples_; }
  /// r^{2/(gamma-1)} v(r) at r_end, reported for gamma > gamma_S.
  std::optional<double> tail_constant() const { return tail_K_; }

  /// Dense evaluation on [0, r_end] by re-stepping from the nearest sample.
  InnerSample at(double r) const;

 private:
  friend InnerProfile shoot_inner(double gamma, int N, double r_max);
  double gamma_ = 1.0;
  int N_ = 3;
  std::optional<double> r0_;
  double r_end_ = 0.0;
  std::optional<double> tail_K_;
  std::vector<InnerSample> samples_;
};

/// Taylor start on [0, 1e-3], then adaptive RK to the first zero or r_max.
InnerProfile shoot_inner(double gamma, int N, double r_max = 1e6);

struct FProfile {
  std::vector<std::pair<double, double>> samples;  // (r, F)
  std::optional<double> r_star;                    // unique zero of F, if any
};

/// F(r) = v + r v' / (N-2); requires N >= 3.
FProfile compute_F(const InnerProfile& inner);

struct Matching {
  double c1;
  double c2;
};

/// Matching constants for center value A: c1 = A F(s), s = A^{(gamma-1)/2} L.
/// Throws std::domain_error when s is not below r0.
Matching c1_of_A(double A, const ProblemParams& params, const InnerProfile& inner);
Matching c1_of_A(double A, const ProblemParams& params);

/// A* with c1(A*) = 0, i.e. A*^{(gamma-1)/2} L = r*; empty when gamma >= gamma_S
/// (infinite) or gamma == 1 (c1 vanishes for every A only at L = L*).
std::optional<double> a_star(const ProblemParams& params, const InnerProfile& inner);

/// max of c1(A) over admissible A; gamma > 1, N >= 3.
double k_star(const ProblemParams& params);

/// First positive root of ((N-2)/2) J_nu(L) + L J_nu'(L); N >= 3.
double critical_length(int N);

class StationaryProfile {
 public:
  double A;
  double c1;
  double c2;
  double L;
  int N;
  double gamma;

  /// (w, w') at radius r >= 0.
  std::pair<double, double> eval(double r) const;
  /// Samples (r, w, w') on a uniform grid of n points over [0, R_max].
  std::vector<InnerSample> sample(double R_max, int n) const;

  std::shared_ptr<const InnerProfile> inner;
};

StationaryProfile build_stationary(const ProblemParams& params, double A);

class DirichletProfile {
 public:
  double R;
  double A;
  double L;
  int N;
  double gamma;

  /// (w, w') on [0, R].
  std::pair<double, double> eval(double r) const;
  std::vector<InnerSample> sample(int n) const;

  std::shared_ptr<const InnerProfile> inner;
};

/// Positive radial solution of Δw + 1_{B_L} w^gamma = 0 in B_R, w(R) = 0.
/// For gamma = 1 the problem is linear, R must equal dirichlet_R_of_L and the
/// profile is normalized to A = 1.
DirichletProfile dirichlet_stationary(const ProblemParams& params, double R);

/// The unique R(L) carrying a gamma = 1 Dirichlet solution, L* < L < L1.
double dirichlet_R_of_L(int N, double L);

/// CSV with columns r, w, w_prime.
std::string to_csv(const std::vector<InnerSample>& samples);

}  // namespace growup::stationary
