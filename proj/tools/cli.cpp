#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "growup/eigen.hpp"
#include "growup/io.hpp"
#include "growup/rates.hpp"
#include "growup/selfsim.hpp"
#include "growup/specfun.hpp"
#include "growup/stationary.hpp"
#include "growup/verify.hpp"

namespace growup::cli {

using nlohmann::json;

namespace {

/// Thrown for inconsistent command lines that CLI11 cannot detect.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class E>
E parse_enum(const std::string& s, std::initializer_list<E> values) {
  for (E v : values)
    if (pde::to_string(v) == s) return v;
  throw std::invalid_argument("unknown value: " + s);
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
json number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (j.at(key).is_null()) return std::numeric_limits<double>::infinity();
  return j.at(key).get<double>();
}

/// "a,b,c" or "lo:hi:n" (n evenly spaced values).
std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  if (std::count(s.begin(), s.end(), ':') == 2) {
    const auto a = s.find(':'), b = s.find(':', a + 1);
    const double lo = std::stod(s.substr(0, a)), hi = std::stod(s.substr(a + 1, b - a - 1));
    const int n = std::stoi(s.substr(b + 1));
    if (n < 1) throw UsageError("range needs at least one point: " + s);
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find(',', pos);
    const std::string item = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!item.empty()) out.push_back(std::stod(item));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

int workers() {
  const char* env = std::getenv("GROWUP_WORKERS");
  return env ? std::max(1, std::atoi(env)) : 1;
}

/// Runs job(i) for i < n on GROWUP_WORKERS threads; results stay in index order.
template <class Job>
void parallel_for(std::size_t n, Job job) {
  const int w = std::min<int>(workers(), static_cast<int>(std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) job(i);
  };
  if (w <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int k = 0; k < w; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

void write(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  io::write_file(dir / name, content);
}

json check_json(const verify::Check& c) {
  return {{"name", c.name},           {"value", number(c.value)}, {"target", number(c.target)},
          {"tolerance", c.tolerance}, {"absolute", c.absolute},   {"passed", c.passed}};
}

json recipe_json(const verify::RecipeResult& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c));
  return {{"recipe", r.recipe},       {"criterion", r.criterion}, {"checks", r.statement},
          {"passed", r.passed()},     {"seconds", r.seconds},     {"results", checks}};
}

double lstar_for(int N) { return N >= 3 ? stationary::critical_length(N) : 0.0; }

// ---------------------------------------------------------------- exponents, regime

int cmd_exponents(const ProblemParams& pr, bool as_json, std::ostream& out) {
  const ExponentTable t = exponents(pr);
  const json j = {{"m", pr.m},           {"N", pr.N},          {"p0", t.p0},       {"pF", t.pF},
                  {"pS", number(t.pS)},  {"gamma_S", number(t.gamma_S)},           {"m_star", t.m_star},
                  {"L1", number(t.L1)}};
  if (as_json) {
    out << j.dump(2) << "\n";
  } else {
    for (const auto& [k, v] : j.items()) out << k << " = " << (v.is_null() ? "none" : v.dump()) << "\n";
  }
  return 0;
}

json regime_json(const ProblemParams& pr) {
  const double Ls = lstar_for(pr.N);
  const Regime g = classify_regime(pr, Ls);
  json j = {{"m", pr.m},
            {"p", pr.p},
            {"N", pr.N},
            {"L", pr.L},
            {"L_star", Ls},
            {"globality", to_string(g.globality)},
            {"region", to_string(g.region)},
            {"resolved", g.resolved ? json(to_string(*g.resolved)) : json(nullptr)},
            {"global_at_L", g.global_at_L ? json(*g.global_at_L) : json(nullptr)},
            {"rate_law", to_string(g.rate_law)},
            {"needs_tail_condition", g.needs_tail_condition}};
  if (g.rate_law == RateLaw::exp_lambda0) j["lambda0"] = eigen::lambda0(pr.L, pr.N);
  return j;
}

int cmd_regime(const ProblemParams& pr, bool as_json, std::ostream& out) {
  const json j = regime_json(pr);
  if (as_json) {
    out << j.dump(2) << "\n";
  } else {
    out << "region " << j["region"].get<std::string>();
    if (!j["resolved"].is_null()) out << " (resolved " << j["resolved"].get<std::string>() << ")";
    out << "\nglobality " << j["globality"].get<std::string>() << "\nrate " << j["rate_law"].get<std::string>() << "\n";
    if (j.contains("lambda0")) out << "lambda0 " << j["lambda0"].get<double>() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- special

int finish_special(const json& meta, const std::string& csv, const std::string& name, const std::string& out_dir,
                   std::ostream& out) {
  if (!out_dir.empty()) {
    write(out_dir, name + ".csv", csv);
    write(out_dir, "meta.json", meta.dump(2) + "\n");
  }
  out << meta.dump(2) << "\n";
  return 0;
}

int cmd_special_stationary(int N, double gamma, double L, double A, double R_max, int n, const std::string& dir,
                           std::ostream& out) {
  const ProblemParams pr{1.0, gamma, N, L};
  const stationary::StationaryProfile w = stationary::build_stationary(pr, A);
  io::Csv csv({"r", "w", "dw"});
  for (const auto& s : w.sample(R_max, n)) csv.row({s.r, s.v, s.dv});
  const json meta = {{"kind", "stationary"}, {"N", N}, {"gamma", gamma}, {"L", L}, {"A", A},
                     {"c1", w.c1},           {"c2", w.c2}, {"R_max", R_max}, {"points", n}};
  return finish_special(meta, csv.str(), "stationary", dir, out);
}

int cmd_special_eigen(int N, double L, double R_max, int n, const std::string& dir, std::ostream& out) {
  const double lam = eigen::lambda0(L, N);
  const eigen::EigenSolution e = eigen::eigenprofile(lam, L, N);
  if (!(R_max > 0)) R_max = 5 * L;
  io::Csv csv({"r", "phi", "dphi"});
  for (int i = 0; i < n; ++i) {
    const double r = R_max * i / (n - 1);
    const auto [f, df] = e.eval(r);
    csv.row({r, f, df});
  }
  const json meta = {{"kind", "eigen"}, {"N", N}, {"L", L}, {"lambda0", lam}, {"log_C", e.log_C},
                     {"R_max", R_max}, {"points", n}};
  return finish_special(meta, csv.str(), "eigen", dir, out);
}

int cmd_special_selfsim(double m, int N, const std::string& type, double alpha, double mu, const std::string& dir,
                        std::ostream& out) {
  if (type != "I" && type != "II") throw UsageError("--type must be I or II");
  const auto t = type == "I" ? selfsim::SolutionType::I : selfsim::SolutionType::II;
  const selfsim::SimilarityExponents e{alpha, selfsim::beta_for(t, alpha, m), m, N};
  const selfsim::Trajectory traj = selfsim::separatrix(e);
  const selfsim::SelfSimilarProfile f = selfsim::reconstruct_profile(traj, mu);
  const json meta = {{"kind", "selfsim"},
                     {"type", type},
                     {"m", m},
                     {"N", N},
                     {"alpha", alpha},
                     {"beta", e.beta},
                     {"delta", e.delta()},
                     {"mu", mu},
                     {"near_exponent", f.near_exponent},
                     {"far_exponent", f.far_exponent},
                     {"log_correction", f.log_correction},
                     {"log_ratio_variation", number(f.log_ratio_variation)},
                     {"richardson_change", traj.richardson_change}};
  if (!dir.empty()) write(dir, "trajectory.csv", selfsim::trajectory_csv(traj));
  return finish_special(meta, selfsim::profile_csv(f), "selfsim", dir, out);
}

// ---------------------------------------------------------------- simulate

json run_report(const pde::SimulationRun& run) {
  json j = {{"outcome", pde::to_string(run.outcome)},
            {"T_estimate", number(run.T_estimate)},
            {"steps", run.steps},
            {"sup0", run.sup0},
            {"final_time", run.sup_series.back().t},
            {"final_sup", number(run.sup_series.back().sup)},
            {"threshold_crossed", run.threshold_crossed},
            {"step_collapse", run.step_collapse},
            {"non_unique_regime", run.non_unique_regime},
            {"monotone", run.monotone}};
  double worst = 0.0;
  for (const auto& s : run.sup_series) {
    const double b = pde::flat_bound(run.sup0, run.params.p, s.t);
    if (run.config.reaction != pde::Reaction::none && std::isfinite(b) && b > 0) worst = std::max(worst, s.sup / b);
  }
  j["flat_bound"] = {{"max_ratio", worst}, {"passed", worst <= 1 + 1e-9}};
  if (!run.snapshots.empty()) {
    const pde::MassReport m = pde::mass_functional(run);
    j["mass_functional"] = {{"exponent", m.exponent},         {"t0", number(m.t0)},
                            {"C", number(m.C)},               {"C_fit", number(m.C_fit)},
                            {"T_bound", number(m.T_bound)},   {"T_predicted", number(m.T_predicted)},
                            {"conclusion", m.conclusion}};
    if (run.params.p > run.params.m && run.config.reaction == pde::Reaction::localized) {
      const pde::KaplanReport k = pde::kaplan_functional(run, run.params.L);
      j["kaplan"] = {{"lambda1", k.lambda1},
                     {"J0", k.J.empty() ? 0.0 : k.J.front()},
                     {"threshold", k.threshold},
                     {"above_threshold", k.above_threshold}};
    }
  }
  return j;
}

int cmd_simulate(const ExperimentConfig& c, std::ostream& out) {
  const pde::SimulationRun run = pde::simulate(c.params, make_initial(c), make_grid(c), make_sim_config(c));
  json report = run_report(run);
  if (run.config.reaction == pde::Reaction::none && c.params.m == 1.0 && c.initial.kind == "gaussian") {
    // Exact solution a (w^2/(w^2+4t))^{N/2} exp(-r^2/(w^2+4t)) on the whole space.
    const double t = run.sup_series.back().t, w2 = c.initial.width * c.initial.width;
    const double exact = c.initial.amplitude * std::pow(w2 / (w2 + 4 * t), c.params.N / 2.0);
    const double ratio = run.sup_series.back().sup / exact;
    report["heat_kernel"] = {{"ratio", ratio}, {"passed", std::abs(ratio - 1) <= 0.02}};
  }
  const std::filesystem::path dir = c.output_dir;
  write(dir, "series.csv", pde::series_csv(run));
  write(dir, "snapshots.csv", pde::snapshots_csv(run));
  write(dir, "meta.json",
        json{{"config", to_json(c)}, {"files", {"series.csv", "snapshots.csv", "report.json"}}}.dump(2) + "\n");
  write(dir, "report.json", report.dump(2) + "\n");
  out << report.dump(2) << "\n";
  bool ok = report["flat_bound"]["passed"].get<bool>();
  if (report.contains("heat_kernel")) ok = ok && report["heat_kernel"]["passed"].get<bool>();
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- sweep

std::string expected_outcome(const Regime& g) {
  if (g.global_at_L && !*g.global_at_L) return "blow-up";
  const Region r = g.resolved ? *g.resolved : g.region;
  if (r == Region::D) return "bounded";
  if (r == Region::A) return "grow-up";
  return "data-dependent";
}

const std::vector<std::string> kSweepHeader = {"m",        "p",       "N",     "L",          "region",
                                               "rate_law", "expected", "outcome", "agree", "T_estimate", "error"};

int cmd_sweep(const std::vector<double>& ms, const std::vector<double>& ps, const std::vector<double>& Ls, int N,
              double t_max, const std::string& dir, std::ostream& out) {
  struct Cell {
    double m, p, L;
    std::vector<io::Cell> row;
  };
  std::vector<Cell> cells;
  for (double m : ms)
    for (double p : ps)
      for (double L : Ls) cells.push_back({m, p, L, {}});
  parallel_for(cells.size(), [&](std::size_t i) {
    Cell& c = cells[i];
    const ProblemParams pr{c.m, c.p, N, c.L};
    std::string region, rate, expected, outcome, agree, error;
    double T = NAN;
    try {
      const Regime g = classify_regime(pr, lstar_for(N));
      region = to_string(g.resolved ? *g.resolved : g.region);
      rate = to_string(g.rate_law);
      expected = expected_outcome(g);
      const double R = std::max(8.0, 4.0 * c.L);
      pde::SimulationConfig sc;
      sc.t_max = t_max;
      sc.keep_snapshots = false;
      const pde::SimulationRun run =
          pde::simulate(pr, [L = c.L](double r) { return std::exp(-r * r / (L * L)); },
                        pde::RadialGrid::uniform(N, R, static_cast<int>(std::lround(10 * R))), sc);
      outcome = pde::to_string(run.outcome);
      if (run.T_estimate) T = *run.T_estimate;
      agree = expected == "data-dependent" || run.outcome == pde::Outcome::inconclusive ? "n/a" : (expected == outcome ? "yes" : "no");
    } catch (const std::exception& e) {
      error = e.what();
    }
    c.row = {c.m, c.p, static_cast<long>(N), c.L, region, rate, expected, outcome, agree, T, error};
  });
  io::Csv csv(kSweepHeader);
  for (const Cell& c : cells) csv.row(c.row);
  if (!dir.empty()) {
    write(dir, "sweep.csv", csv.str());
    write(dir, "meta.json",
          json{{"N", N}, {"m", ms}, {"p", ps}, {"L", Ls}, {"t_max", t_max}, {"workers", workers()}}.dump(2) + "\n");
  } else {
    out << csv.str();
  }
  return 0;
}

int cmd_table(const std::string& table, int N, const std::vector<double>& Ls, const std::vector<double>& ms,
              const std::vector<double>& ps, const std::string& dir, std::ostream& out) {
  std::vector<std::string> header;
  struct Row {
    double a, b;
    double value = NAN;
    std::string error;
  };
  std::vector<Row> rows;
  if (table == "lambda0" || table == "R") {
    header = {"L", table == "R" ? "R" : "lambda0", "error"};
    for (double L : Ls) rows.push_back({L, 0, NAN, {}});
  } else if (table == "lambda-star") {
    header = {"m", "L", "lambda_star", "error"};
    for (double m : ms)
      for (double L : Ls) rows.push_back({m, L, NAN, {}});
  } else if (table == "k-star") {
    header = {"m", "p", "k_star", "error"};
    for (double m : ms)
      for (double p : ps) rows.push_back({m, p, NAN, {}});
  } else {
    throw UsageError("unknown table: " + table);
  }
  parallel_for(rows.size(), [&](std::size_t i) {
    Row& r = rows[i];
    try {
      if (table == "lambda0") r.value = eigen::lambda0(r.a, N);
      if (table == "R") r.value = stationary::dirichlet_R_of_L(N, r.a);
      if (table == "lambda-star") r.value = eigen::lambda_star(r.a, r.b, N);
      if (table == "k-star") r.value = stationary::k_star({r.a, r.b, N, 1.0});
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  io::Csv csv(header);
  for (const Row& r : rows) {
    if (header.size() == 3)
      csv.row({r.a, r.value, r.error});
    else
      csv.row({r.a, r.b, r.value, r.error});
  }
  if (!dir.empty())
    write(dir, table + ".csv", csv.str());
  else
    out << csv.str();
  return 0;
}

}  // namespace

// ---------------------------------------------------------------- config

json to_json(const ExperimentConfig& c) {
  return {{"params", {{"m", c.params.m}, {"p", c.params.p}, {"N", c.params.N}, {"L", c.params.L}}},
          {"grid",
           {{"kind", c.grid.kind},
            {"R_max", c.grid.R_max},
            {"M", c.grid.M},
            {"h", c.grid.h},
            {"r_uniform", c.grid.r_uniform},
            {"growth", c.grid.growth}}},
          {"initial",
           {{"kind", c.initial.kind},
            {"value", c.initial.value},
            {"amplitude", c.initial.amplitude},
            {"width", c.initial.width},
            {"A", c.initial.A},
            {"lambda", c.initial.lambda},
            {"scale", c.initial.scale}}},
          {"t_max", c.t_max},
          {"boundary", c.boundary},
          {"reaction", c.reaction},
          {"trace_radii", c.trace_radii},
          {"outputs_per_decade", c.outputs_per_decade},
          {"t_first_output", c.t_first_output},
          {"dt_max", number(c.dt_max)},
          {"cfl", c.cfl},
          {"reaction_cfl", c.reaction_cfl},
          {"policy",
           {{"blowup_threshold", c.policy.blowup_threshold}, {"plateau_tolerance", c.policy.plateau_tolerance}}},
          {"output_dir", c.output_dir}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("params")) {
    const json& p = j.at("params");
    c.params.m = p.value("m", c.params.m);
    c.params.p = p.value("p", c.params.p);
    c.params.N = p.value("N", c.params.N);
    c.params.L = p.value("L", c.params.L);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    c.grid.kind = g.value("kind", c.grid.kind);
    c.grid.R_max = g.value("R_max", c.grid.R_max);
    c.grid.M = g.value("M", c.grid.M);
    c.grid.h = g.value("h", c.grid.h);
    c.grid.r_uniform = g.value("r_uniform", c.grid.r_uniform);
    c.grid.growth = g.value("growth", c.grid.growth);
  }
  if (j.contains("initial")) {
    const json& i = j.at("initial");
    c.initial.kind = i.value("kind", c.initial.kind);
    c.initial.value = i.value("value", c.initial.value);
    c.initial.amplitude = i.value("amplitude", c.initial.amplitude);
    c.initial.width = i.value("width", c.initial.width);
    c.initial.A = i.value("A", c.initial.A);
    c.initial.lambda = i.value("lambda", c.initial.lambda);
    c.initial.scale = i.value("scale", c.initial.scale);
  }
  c.t_max = j.value("t_max", c.t_max);
  c.boundary = j.value("boundary", c.boundary);
  c.reaction = j.value("reaction", c.reaction);
  c.trace_radii = j.value("trace_radii", c.trace_radii);
  c.outputs_per_decade = j.value("outputs_per_decade", c.outputs_per_decade);
  c.t_first_output = j.value("t_first_output", c.t_first_output);
  c.dt_max = get_number(j, "dt_max", c.dt_max);
  c.cfl = j.value("cfl", c.cfl);
  c.reaction_cfl = j.value("reaction_cfl", c.reaction_cfl);
  if (j.contains("policy")) {
    c.policy.blowup_threshold = j.at("policy").value("blowup_threshold", c.policy.blowup_threshold);
    c.policy.plateau_tolerance = j.at("policy").value("plateau_tolerance", c.policy.plateau_tolerance);
  }
  c.output_dir = j.value("output_dir", c.output_dir);
  make_sim_config(c);
  if (c.grid.kind != "uniform" && c.grid.kind != "stretched") throw std::invalid_argument("unknown grid kind: " + c.grid.kind);
  const auto& k = c.initial.kind;
  if (k != "constant" && k != "gaussian" && k != "stationary" && k != "separated")
    throw std::invalid_argument("unknown initial data kind: " + k);
  return c;
}

pde::RadialGrid make_grid(const ExperimentConfig& c) {
  if (c.grid.kind == "stretched")
    return pde::RadialGrid::stretched(c.params.N, c.grid.h, c.grid.r_uniform, c.grid.growth, c.grid.R_max);
  return pde::RadialGrid::uniform(c.params.N, c.grid.R_max, c.grid.M);
}

pde::InitialData make_initial(const ExperimentConfig& c) {
  const InitialSpec& s = c.initial;
  if (s.kind == "constant") return [v = s.value](double) { return v; };
  if (s.kind == "gaussian")
    return [a = s.amplitude, w = s.width](double r) { return a * std::exp(-r * r / (w * w)); };
  if (s.kind == "stationary") {
    const auto w = std::make_shared<stationary::StationaryProfile>(stationary::build_stationary(c.params, s.A));
    return [w, m = c.params.m, k = s.scale](double r) { return k * std::pow(std::max(0.0, w->eval(r).first), 1.0 / m); };
  }
  if (s.kind == "separated") {
    const auto sp = std::make_shared<eigen::SeparatedProfile>(
        eigen::separated_profile(c.params.m, c.params.L, c.params.N, s.lambda, c.grid.R_max));
    return [sp, k = s.scale](double r) {
      const auto& v = sp->samples;
      if (v.empty() || r > v.back().r) return 0.0;
      const auto it = std::lower_bound(v.begin(), v.end(), r, [](const auto& a, double x) { return a.r < x; });
      if (it == v.begin()) return k * it->phi;
      const auto& b = *it;
      const auto& a = *(it - 1);
      const double t = (r - a.r) / (b.r - a.r);
      return k * std::max(0.0, a.phi + t * (b.phi - a.phi));
    };
  }
  throw std::invalid_argument("unknown initial data kind: " + s.kind);
}

pde::SimulationConfig make_sim_config(const ExperimentConfig& c) {
  pde::SimulationConfig s;
  s.t_max = c.t_max;
  s.boundary = parse_enum(c.boundary, {pde::Boundary::dirichlet_zero, pde::Boundary::flat_bound, pde::Boundary::zero_flux});
  s.reaction = parse_enum(c.reaction, {pde::Reaction::localized, pde::Reaction::none, pde::Reaction::everywhere});
  s.trace_radii = c.trace_radii;
  s.outputs_per_decade = c.outputs_per_decade;
  s.t_first_output = c.t_first_output;
  s.dt_max = c.dt_max;
  s.cfl = c.cfl;
  s.reaction_cfl = c.reaction_cfl;
  s.policy = c.policy;
  return s;
}

// ---------------------------------------------------------------- entry point

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Localized-reaction quasilinear heat equation laboratory", "growup"};
  app.require_subcommand(1);

  ProblemParams pr;
  bool as_json = false;
  const auto add_params = [&](CLI::App* sub, bool with_p, bool with_L) {
    sub->add_option("--m", pr.m, "diffusion exponent");
    if (with_p) sub->add_option("--p", pr.p, "reaction exponent");
    sub->add_option("--N", pr.N, "space dimension");
    if (with_L) sub->add_option("--L", pr.L, "reaction ball radius");
    sub->add_flag("--json", as_json, "JSON output");
  };

  auto* exps = app.add_subcommand("exponents", "critical exponents for (m, N)");
  add_params(exps, false, false);
  auto* reg = app.add_subcommand("regime", "globality, grow-up region and rate law for (m, p, N, L)");
  add_params(reg, true, true);

  auto* special = app.add_subcommand("special", "stationary, exponential and self-similar special solutions");
  special->require_subcommand(1);
  std::string out_dir;
  int n_points = 201;
  double gamma = 1.0, A = 1.0, R_max = 10.0, alpha = 0.0, mu = 1.0;
  std::string type = "I";
  auto* sp_stat = special->add_subcommand("stationary", "stationary profile and matching constants");
  sp_stat->add_option("--N", pr.N)->required();
  sp_stat->add_option("--gamma", gamma, "p/m")->required();
  sp_stat->add_option("--L", pr.L)->required();
  sp_stat->add_option("--A", A, "center value");
  sp_stat->add_option("--R-max", R_max);
  sp_stat->add_option("--points", n_points)->check(CLI::Range(2, 10000000));
  sp_stat->add_option("--out", out_dir);
  auto* sp_eig = special->add_subcommand("eigen", "lambda0 and the exponential profile (m = p = 1)");
  sp_eig->add_option("--N", pr.N)->required();
  sp_eig->add_option("--L", pr.L)->required();
  double eig_R = 0.0;
  sp_eig->add_option("--R-max", eig_R, "default 5L");
  sp_eig->add_option("--points", n_points)->check(CLI::Range(2, 10000000));
  sp_eig->add_option("--out", out_dir);
  auto* sp_ss = special->add_subcommand("selfsim", "self-similar pure-diffusion profile");
  sp_ss->add_option("--m", pr.m)->required();
  sp_ss->add_option("--N", pr.N)->required();
  sp_ss->add_option("--type", type, "I or II")->check(CLI::IsMember({"I", "II"}));
  sp_ss->add_option("--alpha", alpha)->required();
  sp_ss->add_option("--mu", mu);
  sp_ss->add_option("--out", out_dir);

  auto* sim = app.add_subcommand("simulate", "one PDE experiment");
  std::string config_path;
  sim->add_option("--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  std::optional<double> o_m, o_p, o_L, o_t, o_R, o_amp, o_width, o_value;
  std::optional<int> o_N, o_M;
  std::optional<std::string> o_init, o_bc, o_reaction, o_out, o_traces;
  sim->add_option("--m", o_m);
  sim->add_option("--p", o_p);
  sim->add_option("--N", o_N);
  sim->add_option("--L", o_L);
  sim->add_option("--t-max", o_t);
  sim->add_option("--R-max", o_R);
  sim->add_option("--M", o_M, "grid cells");
  sim->add_option("--initial", o_init, "constant | gaussian | stationary | separated");
  sim->add_option("--amplitude", o_amp);
  sim->add_option("--width", o_width);
  sim->add_option("--value", o_value);
  sim->add_option("--boundary", o_bc, "dirichlet-zero | flat-bound | zero-flux");
  sim->add_option("--reaction", o_reaction, "localized | none | everywhere");
  sim->add_option("--trace", o_traces, "comma-separated radii");
  sim->add_option("--out", o_out, "output directory");

  auto* ver = app.add_subcommand("verify", "canned verification recipes");
  std::string recipe;
  ver->add_option("recipe", recipe, "recipe name or 'all'")->required();

  auto* sweep = app.add_subcommand("sweep", "parameter sweeps and tables");
  std::string s_m, s_p, s_L = "2", table;
  double s_t = 200.0;
  int s_N = 3;
  sweep->add_option("--m", s_m, "list a,b,c or range lo:hi:n");
  sweep->add_option("--p", s_p, "list or range");
  sweep->add_option("--L", s_L, "list or range");
  sweep->add_option("--N", s_N);
  sweep->add_option("--t-max", s_t);
  sweep->add_option("--table", table, "lambda0 | lambda-star | R | k-star");
  sweep->add_option("--out", out_dir);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*exps) return cmd_exponents(pr, as_json, out);
    if (*reg) return cmd_regime(pr, as_json, out);
    if (*sp_stat) return cmd_special_stationary(pr.N, gamma, pr.L, A, R_max, n_points, out_dir, out);
    if (*sp_eig) return cmd_special_eigen(pr.N, pr.L, eig_R, n_points, out_dir, out);
    if (*sp_ss) return cmd_special_selfsim(pr.m, pr.N, type, alpha, mu, out_dir, out);
    if (*sim) {
      ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : config_from_json(json::parse(io::read_file(config_path)));
      if (o_m) c.params.m = *o_m;
      if (o_p) c.params.p = *o_p;
      if (o_N) c.params.N = *o_N;
      if (o_L) c.params.L = *o_L;
      if (o_t) c.t_max = *o_t;
      if (o_R) c.grid.R_max = *o_R;
      if (o_M) c.grid.M = *o_M;
      if (o_init) c.initial.kind = *o_init;
      if (o_amp) c.initial.amplitude = *o_amp;
      if (o_width) c.initial.width = *o_width;
      if (o_value) c.initial.value = *o_value;
      if (o_bc) c.boundary = *o_bc;
      if (o_reaction) c.reaction = *o_reaction;
      if (o_traces) c.trace_radii = parse_list(*o_traces);
      if (o_out) c.output_dir = *o_out;
      return cmd_simulate(config_from_json(to_json(c)), out);
    }
    if (*ver) {
      std::vector<std::string> names = recipe == "all" ? verify::recipe_names() : std::vector<std::string>{recipe};
      json all = json::array();
      bool ok = true;
      for (const auto& name : names) {
        const verify::RecipeResult r = verify::run_recipe(name);
        ok = ok && r.passed();
        all.push_back(recipe_json(r));
      }
      out << (names.size() == 1 ? all.front() : all).dump(2) << "\n";
      return ok ? 0 : 1;
    }
    if (*sweep) {
      if (!table.empty()) return cmd_table(table, s_N, parse_list(s_L), parse_list(s_m), parse_list(s_p), out_dir, out);
      return cmd_sweep(parse_list(s_m), parse_list(s_p), parse_list(s_L), s_N, s_t, out_dir, out);
    }
  } catch (const json::exception& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace growup::cli
