#include "growup/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "growup/io.hpp"
#include "growup/ode.hpp"

namespace growup::selfsim {

namespace {

constexpr double kZeroDelta = 1e-12;
constexpr double kStep = 0.01;

using S2 = ode::State<2>;

struct Raw {
  double eta, X, Z, dX, dZ;
};

void validate(const SimilarityExponents& e) {
  const double m_star = std::max(0, e.N - 2) / static_cast<double>(e.N);
  if (e.N < 1) throw std::domain_error("selfsim: N must be >= 1");
  if (!(e.m > m_star && e.m < 1.0)) throw std::domain_error("selfsim: need m* < m < 1");
  if (!(e.alpha > 0.0 && e.beta > 0.0)) throw std::domain_error("selfsim: need alpha, beta > 0");
  if (e.delta() < -kZeroDelta) throw std::domain_error("selfsim: need delta >= 0");
}

S2 field_xz(const SimilarityExponents& e, const S2& y) {
  const double X = y[0];
  return {(2.0 - e.N) * X - e.m * X * X + std::exp(y[1]) * (e.alpha + e.beta * X),
          2.0 + (1.0 - e.m) * X};
}

double x_start(const SimilarityExponents& e) { return e.N >= 3 ? (2.0 - e.N) / e.m : 0.0; }
double x_far(const SimilarityExponents& e) { return -2.0 / (1.0 - e.m); }
double k0(const SimilarityExponents& e) {
  return (4.0 - 2.0 * e.N * (1.0 - e.m)) / ((1.0 - e.m) * (1.0 - e.m));
}

double hermite(double y0, double y1, double d0, double d1, double h, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

// Backward integration from (X, Z) at η = 0 to the source equilibrium,
// resampled on the uniform grid η = -k * kStep.
std::vector<PhasePoint> integrate_back(const SimilarityExponents& e, S2 start) {
  const double xs = x_start(e), xc = x_far(e);
  const ode::Rhs<2> rhs = [&e](double, const S2& y) { return field_xz(e, y); };
  std::vector<Raw> raw;
  bool left_region = false;
  const auto obs = [&](double eta, const S2& y) {
    const S2 d = field_xz(e, y);
    raw.push_back({eta, y[0], y[1], d[0], d[1]});
    if (y[0] < xc - 1e-6 || y[0] > std::max(xs, 0.0) + 1e-6) {
      left_region = true;
      return false;
    }
    if (e.N == 2) return y[0] < -0.004;
    return !(std::abs(y[0] - xs) < 1e-13 && y[1] < std::log(1e-13));
  };
  const ode::Tolerances tol{.rtol = 1e-12, .atol = 1e-14, .h_init = 1e-5, .h_max = kStep,
                            .max_steps = 20'000'000};
  const auto out = ode::integrate<2>(rhs, 0.0, start, -1e5, tol, obs);
  if (left_region) throw std::runtime_error("separatrix: orbit left the invariant region");
  if (out.stop == ode::Stop::failed) throw std::runtime_error("separatrix: integration failure");

  std::reverse(raw.begin(), raw.end());
  std::vector<PhasePoint> pts;
  const int K = static_cast<int>(std::floor(-raw.front().eta / kStep));
  pts.resize(K + 1);
  std::size_t j = 0;
  for (int k = K; k >= 0; --k) {
    const double eta = -k * kStep;
    while (j + 2 < raw.size() && raw[j + 1].eta <= eta) ++j;
    const Raw& a = raw[j];
    const Raw& b = raw[j + 1];
    const double h = b.eta - a.eta;
    const double t = h > 0 ? std::clamp((eta - a.eta) / h, 0.0, 1.0) : 0.0;
    const double X = hermite(a.X, b.X, a.dX, b.dX, h, t);
    const double Z = hermite(a.Z, b.Z, a.dZ, b.dZ, h, t);
    pts[K - k] = {eta, X, std::exp(Z), Z};
  }
  return pts;
}

// η shift that puts the orbit in normalized position.
double normalization_shift(const Trajectory& tr) {
  const auto& e = tr.exponents;
  const auto& p = tr.points;
  if (e.N == 2) {
    const double target = -std::log(e.m);
    for (std::size_t i = 1; i < p.size(); ++i) {
      if (p[i].logY >= target) {
        const auto z = [&](double t) {
          return hermite(p[i - 1].logY, p[i].logY, 2.0 + (1.0 - e.m) * p[i - 1].X,
                         2.0 + (1.0 - e.m) * p[i].X, tr.step, t) - target;
        };
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (z(mid) < 0.0 ? lo : hi) = mid;
        }
        return -(p[i - 1].eta + 0.5 * (lo + hi) * tr.step);
      }
    }
    throw std::runtime_error("reconstruct_profile: orbit never reaches f(1) = 1");
  }
  const double rate = 2.0 + (1.0 - e.m) * x_start(e);
  const double z0 = p.front().logY - rate * p.front().eta;
  return (z0 + std::log(e.m)) / rate;
}

// Max |ΔX| between two computations of the same orbit at equal normalized η,
// skipping the part of `a` within `skip_tail` of its start (η = 0).
double orbit_difference(const Trajectory& a, const Trajectory& b, double skip_tail) {
  const auto& e = a.exponents;
  const double sa = normalization_shift(a), sb = normalization_shift(b);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.points.size(); i += 10) {
    if (a.points[i].eta > -skip_tail) break;
    const double eta = a.points[i].eta + sa - sb;  // same normalized η on b
    const double pos = (eta - b.points.front().eta) / b.step;
    if (pos < 0 || pos >= b.points.size() - 1.0) continue;
    const std::size_t k = static_cast<std::size_t>(pos);
    const auto& p0 = b.points[k];
    const auto& p1 = b.points[k + 1];
    const double d0 = field_xz(e, {p0.X, p0.logY})[0], d1 = field_xz(e, {p1.X, p1.logY})[0];
    const double xb = hermite(p0.X, p1.X, d0, d1, b.step, pos - k);
    diff = std::max(diff, std::abs(a.points[i].X - xb));
  }
  return diff;
}

Trajectory from_c(const SimilarityExponents& e, double displacement) {
  const PhasePoint C = point_C(e);
  // Jacobian in (X, Y) at C; J22 = 0.
  const double j11 = (2.0 - e.N) - 2.0 * e.m * C.X + e.beta * C.Y;
  const double j12 = e.alpha + e.beta * C.X;
  const double j21 = (1.0 - e.m) * C.Y;
  const double ls = 0.5 * (j11 - std::sqrt(j11 * j11 + 4.0 * j12 * j21));
  double vx = ls, vy = j21;
  const double nrm = std::hypot(vx, vy);
  vx /= nrm;
  vy /= nrm;
  // Backward in η the orbit heads to larger X and smaller Y.
  const double X0 = C.X - displacement * vx;
  const double Y0 = C.Y - displacement * vy;
  Trajectory tr{e, integrate_back(e, {X0, std::log(Y0)}), kStep, 0.0};
  return tr;
}

Trajectory from_infinity(const SimilarityExponents& e, double y_far) {
  const double X0 = x_far(e) + k0(e) / (e.beta * y_far);
  return {e, integrate_back(e, {X0, std::log(y_far)}), kStep, 0.0};
}

double fit_slope(const std::vector<double>& y, std::size_t from, std::size_t to, double h) {
  const double n = static_cast<double>(to - from);
  double mx = 0, my = 0;
  for (std::size_t i = from; i < to; ++i) {
    mx += i * h / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = from; i < to; ++i) {
    sxy += (i * h - mx) * (y[i] - my);
    sxx += (i * h - mx) * (i * h - mx);
  }
  return sxy / sxx;
}

}  // namespace

std::pair<double, double> phase_field(const PhasePoint& pt, const SimilarityExponents& e) {
  return {(2.0 - e.N) * pt.X - e.m * pt.X * pt.X + pt.Y * (e.alpha + e.beta * pt.X),
          (2.0 + (1.0 - e.m) * pt.X) * pt.Y};
}

PhasePoint point_B(const SimilarityExponents& e) {
  return {0.0, (2.0 - e.N) / e.m, 0.0, -INFINITY};
}

PhasePoint point_C(const SimilarityExponents& e) {
  const double d = e.delta();
  if (!(d > kZeroDelta)) throw std::domain_error("point_C: requires delta > 0");
  const double Y = (4.0 - 2.0 * e.N * (1.0 - e.m)) / ((1.0 - e.m) * d);
  return {0.0, -2.0 / (1.0 - e.m), Y, std::log(Y)};
}

Trajectory separatrix(const SimilarityExponents& e, double displacement) {
  validate(e);
  if (e.delta() > kZeroDelta) {
    Trajectory tr = from_c(e, displacement);
    tr.richardson_change = orbit_difference(tr, from_c(e, displacement / 2.0), 0.0);
    return tr;
  }
  // Raise the far-field start until the normalized orbit reaches ξ = 1e6.
  for (double y_far = 1e2; y_far <= 1e8; y_far *= 10.0) {
    Trajectory tr = from_infinity(e, y_far);
    if (normalization_shift(tr) < std::log(1e6)) continue;
    // The first η units after the start are the relaxation onto the orbit.
    tr.richardson_change = orbit_difference(tr, from_infinity(e, 2.0 * y_far), 3.0);
    return tr;
  }
  throw std::runtime_error("separatrix: far-field range not reached");
}

SelfSimilarProfile reconstruct_profile(const Trajectory& traj, double mu) {
  if (!(mu > 0.0)) throw std::domain_error("reconstruct_profile: mu must be positive");
  const auto& e = traj.exponents;
  const auto& p = traj.points;
  if (p.size() < 500) throw std::runtime_error("reconstruct_profile: orbit too short for the fits");
  const double s = normalization_shift(traj);
  SelfSimilarProfile prof{};
  prof.exponents = e;
  prof.mu = mu;
  const double d = e.delta();
  if (std::abs(d - 1.0) < kZeroDelta) prof.type = SolutionType::I;
  if (std::abs(d) < kZeroDelta) prof.type = SolutionType::II;
  prof.log_correction = std::abs(d) < kZeroDelta;
  prof.eta0 = p.front().eta + s;
  prof.step = traj.step;
  for (const auto& q : p) {
    const double eta = q.eta + s;
    prof.logf.push_back((q.logY + std::log(e.m) - 2.0 * eta) / (1.0 - e.m));
    prof.X.push_back(q.X);
  }
  const std::size_t n = p.size(), w = 200;
  prof.near_exponent = fit_slope(prof.logf, 0, w, traj.step);
  prof.far_exponent = fit_slope(prof.logf, n - w, n, traj.step);
  if (prof.log_correction) {
    const double k = 1.0 / (1.0 - e.m);
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i <= 200; ++i) {
      const double xi = std::pow(10.0, 2.0 + 2.0 * i / 200.0);
      const double lq = std::log(prof.eval(xi).f) + 2.0 * k * std::log(xi) - k * std::log(std::log(xi));
      lo = std::min(lo, lq);
      hi = std::max(hi, lq);
    }
    prof.log_ratio_variation = std::exp(hi - lo) - 1.0;
  }
  return prof;
}

ProfileValue SelfSimilarProfile::eval(double xi) const {
  if (!(xi > 0.0)) throw std::domain_error("SelfSimilarProfile::eval: xi must be positive");
  const double m = exponents.m;
  const double scale = 2.0 / (1.0 - m) * std::log(mu);
  const double eta = std::log(mu * xi);
  const std::size_t n = logf.size();
  const double eta_end = eta0 + (n - 1) * step;
  if (eta < eta0) return {std::exp(scale + logf.front() + near_exponent * (eta - eta0)), true};
  if (eta > eta_end) {
    double lf = logf.back() + far_exponent * (eta - eta_end);
    if (log_correction && eta_end > 0.0) lf += std::log(eta / eta_end) / (1.0 - m);
    return {std::exp(scale + lf), true};
  }
  const double pos = (eta - eta0) / step;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), n - 2);
  const double lf = hermite(logf[i], logf[i + 1], X[i], X[i + 1], step, pos - i);
  return {std::exp(scale + lf), false};
}

double SelfSimilarProfile::X_at(double xi) const {
  const double eta = std::log(mu * xi);
  const double pos = std::clamp((eta - eta0) / step, 0.0, logf.size() - 1.0);
  const std::size_t i = std::min(static_cast<std::size_t>(pos), logf.size() - 2);
  const double t = pos - i;
  return (1 - t) * X[i] + t * X[i + 1];
}

double SelfSimilarProfile::xi_min() const { return std::exp(eta0) / mu; }
double SelfSimilarProfile::xi_max() const { return std::exp(eta0 + (logf.size() - 1) * step) / mu; }

std::vector<std::pair<double, double>> SelfSimilarProfile::samples() const {
  const double scale = 2.0 / (1.0 - exponents.m) * std::log(mu);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < logf.size(); ++i)
    out.emplace_back(std::exp(eta0 + i * step) / mu, std::exp(scale + logf[i]));
  return out;
}

double evaluate_U(const SelfSimilarProfile& profile, double r, double t) {
  if (!profile.type) throw std::domain_error("evaluate_U: profile has no solution type (delta not 0 or 1)");
  const double a = profile.exponents.alpha, b = profile.exponents.beta;
  if (*profile.type == SolutionType::I) {
    if (!(t > 0.0)) throw std::domain_error("evaluate_U: type I needs t > 0");
    return std::pow(t, a) * profile.eval(r * std::pow(t, b)).f;
  }
  return std::exp(a * t) * profile.eval(r * std::exp(b * t)).f;
}

double beta_for(SolutionType type, double alpha, double m) {
  return type == SolutionType::I ? (alpha * (1.0 - m) - 1.0) / 2.0 : alpha * (1.0 - m) / 2.0;
}

std::string trajectory_csv(const Trajectory& traj) {
  io::Csv csv({"eta", "X", "Y"});
  for (const auto& p : traj.points) csv.row({p.eta, p.X, p.Y});
  return csv.str();
}

std::string profile_csv(const SelfSimilarProfile& profile) {
  io::Csv csv({"xi", "f"});
  for (const auto& [x, f] : profile.samples()) csv.row({x, f});
  return csv.str();
}

}  // namespace growup::selfsim
