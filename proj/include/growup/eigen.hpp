#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

/// Exponential solutions e^{λt} φ(|x|) of the linear problem m = p = 1 and
/// separated-variable profiles for p = m < 1.
namespace growup::eigen {

struct PhiValue {
  double value;
  bool pole;  // J_nu(L sqrt(1-λ)) vanishes
};

/// Φ(λ, L) = √(1-λ) J'/J(L√(1-λ)) - √λ K'/K(L√λ), 0 < λ < 1, N >= 2.
PhiValue phi_capital(double lambda, double L, int N);

/// Largest root of Φ(·, L) with L√(1-λ) below the first zero of J_nu.
/// Throws specfun::RootError for L <= L*(N).
double lambda0(double L, int N);

class EigenSolution {
 public:
  double lambda0;
  double C;      // J_nu(L√(1-λ)) / K_nu(L√λ); may overflow for very large L
  double log_C;
  double L;
  int N;

  /// (φ, φ') at r >= 0.
  std::pair<double, double> eval(double r) const;
  std::vector<std::pair<double, double>> sample(double R_max, int n) const;
};

/// Throws std::domain_error when λ0 gives a non-positive profile.
EigenSolution eigenprofile(double lambda0, double L, int N);

struct SeparatedSample {
  double r;
  double phi;
  double h;   // φ^m
  double dh;
};

struct SeparatedProfile {
  double lambda;
  double m;
  double L;
  int N;
  std::vector<SeparatedSample> samples;
  /// First zero of φ; empty when φ stays positive (it then increases for
  /// r >= L, or survives up to the truncation radius).
  std::optional<double> R_lambda;
};

/// Shoots (φ^m)'' + (N-1)/r (φ^m)' + 1_{r<L} φ^m - λ φ = 0 from φ(0) = 1 in
/// the variable h = φ^m, stopping at h = 0, at h' >= 0 beyond L, or at R_max.
SeparatedProfile separated_profile(double m, double L, int N, double lambda, double R_max);

/// Threshold between finite R_λ and positive profiles, by bisection to 1e-6
/// with truncation radius 1e3 L. Throws specfun::RootError when no finite
/// R_λ exists (L <= L*).
double lambda_star(double m, double L, int N);

std::string to_csv(const std::vector<std::pair<double, double>>& samples,
                   const std::string& x_name, const std::string& y_name);

}  // namespace growup::eigen
