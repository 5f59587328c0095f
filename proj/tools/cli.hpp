#pragma once

// Command-line front end. dispatch() returns 0 on success, 1 on usage
// errors and 2 on runtime failures.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sbandit/sbandit.hpp"

namespace sbandit::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProblemFlags {
  std::string name;
  std::string file;
  std::optional<std::size_t> resolution;

  void add_to(CLI::App* cmd) {
    auto* p = cmd->add_option("--problem", name, "Catalog problem name")->check(CLI::IsMember(builtin_names()));
    auto* f = cmd->add_option("--problem-file", file, "Problem definition file")->check(CLI::ExistingFile);
    p->excludes(f);
    cmd->add_option("--resolution", resolution, "Grid resolution of the parameter interval")
        ->check(CLI::Range(2, 10000000));
  }

  std::shared_ptr<const StructuredBandit> load() const {
    if (name.empty() && file.empty()) throw UsageError("one of --problem or --problem-file is required");
    StructuredBandit b = file.empty() ? make_builtin(name) : load_problem(file);
    if (resolution) b = b.with_resolution(*resolution);
    return std::make_shared<const StructuredBandit>(std::move(b));
  }

  std::string label() const { return file.empty() ? name : file; }
};

struct RunFlags {
  std::uint64_t horizon = 1000;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
  std::string confidence = "exact";
  double ratio = 1.25;

  void add_to(CLI::App* cmd, bool with_horizon = true, std::size_t default_reps = 1) {
    reps = default_reps;
    if (with_horizon) {
      cmd->add_option("--horizon", horizon, "Horizon n")->check(CLI::PositiveNumber)->capture_default_str();
      cmd->add_option("--ratio", ratio, "Geometric checkpoint ratio")->check(CLI::Range(1.000001, 1e6))
          ->capture_default_str();
    }
    cmd->add_option("--reps", reps, "Replications")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
    cmd->add_option("--out", out, "Output table path (default: standard output)");
    cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--confidence", confidence, "Plausible-set computation for UCB-S policies")
        ->check(CLI::IsMember({"exact", "grid"}))
        ->capture_default_str();
  }

  ConfidenceMode mode() const { return confidence == "grid" ? ConfidenceMode::kGrid : ConfidenceMode::kExact; }
};

/// "ucbs" or "ucbs:4" -> PolicySpec.
inline PolicySpec parse_policy_token(const std::string& token, ConfidenceMode mode) {
  const auto colon = token.find(':');
  const std::string id = token.substr(0, colon);
  const auto kind = parse_policy_kind(id);
  if (!kind) throw UsageError("unknown policy '" + id + "'");
  PolicySpec spec{*kind, default_alpha(*kind), mode};
  if (colon != std::string::npos) {
    if (*kind == PolicyKind::kPhased) throw UsageError("policy 'phased' has a fixed alpha");
    try {
      spec.alpha = parse_number(token.substr(colon + 1));
    } catch (const std::invalid_argument&) {
      throw UsageError("bad alpha in '" + token + "'");
    }
  }
  if (!(spec.alpha > 0.0)) throw UsageError("alpha must be positive");
  return spec;
}

inline void emit(const Table& table, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_table(table, out);
  } else {
    write_table(table, path);
  }
}

inline ExperimentConfig base_config(const ProblemFlags& pf, const RunFlags& rf) {
  ExperimentConfig c;
  c.problem = pf.label();
  c.horizon = rf.horizon;
  c.replications = rf.reps;
  c.seed = rf.seed;
  c.workers = rf.workers;
  c.checkpoints = geometric_checkpoints(rf.horizon, rf.ratio);
  return c;
}

struct Preset {
  std::string problem;
  double theta_min;
  double theta_max;
  std::size_t steps;
  std::uint64_t horizon;
  bool horizon_curve;
};

inline Preset preset_for(const std::string& id) {
  if (id == "fig-a-sweep") return {"example-a", -0.2, 0.2, 41, 50000, false};
  if (id == "fig-b-sweep") return {"example-b", -0.2, 0.2, 41, 50000, false};
  if (id == "fig-c-sweep") return {"example-c", -0.2, 0.2, 41, 50000, false};
  if (id == "fig-a-horizon") return {"example-a", 0.04, 0.04, 1, 100000, true};
  throw UsageError("unknown preset '" + id + "'");
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured bandit simulations, bounds and parameter classification", "sbandit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  // run
  auto* run = app.add_subcommand("run", "Mean regret curve of one policy at one parameter value");
  ProblemFlags run_problem;
  RunFlags run_flags;
  double run_theta = 0.0;
  std::string run_algo = "ucbs";
  std::optional<double> run_alpha;
  run_problem.add_to(run);
  run->add_option("--theta", run_theta, "True parameter")->required();
  run->add_option("--algo", run_algo, "Policy")->check(CLI::IsMember({"ucb", "ucbs", "ucbs-ra", "phased"}))
      ->capture_default_str();
  run->add_option("--alpha", run_alpha, "Exploration parameter (default: 2 for ucb, 4 for ucbs/ucbs-ra)");
  run_flags.add_to(run);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Terminal mean regret of several policies over a parameter grid");
  ProblemFlags sweep_problem;
  RunFlags sweep_flags;
  double theta_min = -0.2;
  double theta_max = 0.2;
  std::size_t theta_steps = 41;
  std::vector<std::string> algos{"ucbs", "ucb"};
  sweep_problem.add_to(sweep);
  sweep->add_option("--theta-min", theta_min, "Smallest parameter")->capture_default_str();
  sweep->add_option("--theta-max", theta_max, "Largest parameter")->capture_default_str();
  sweep->add_option("--theta-steps", theta_steps, "Number of parameters")->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--algos", algos, "Policies as id or id:alpha, comma separated")->delimiter(',')
      ->capture_default_str();
  sweep_flags.add_to(sweep);

  // classify
  auto* classify = app.add_subcommand("classify", "Easy / ambiguous / hard label of each grid parameter");
  ProblemFlags classify_problem;
  std::size_t grid = 201;
  classify_problem.add_to(classify);
  classify->add_option("--grid", grid, "Number of grid points")->check(CLI::Range(1, 10000000))
      ->capture_default_str();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Regret bounds");
  int theorem = 1;
  ProblemFlags bounds_problem;
  std::optional<double> bounds_theta;
  double bounds_alpha = 4.0;
  std::uint64_t bounds_n = 10000;
  std::optional<double> bounds_eps;
  double bounds_delta = 0.5;
  double r1 = 0.0;
  double r2 = 0.0;
  bounds->add_option("--theorem", theorem,
                     "1: logarithmic upper bound, 2: horizon-free upper bound, 3: symmetric lower bound, "
                     "4: trade-off lower bounds")
      ->check(CLI::IsMember({1, 2, 3, 4}))
      ->required();
  bounds_problem.add_to(bounds);
  bounds->add_option("--theta", bounds_theta, "True parameter (theorems 1, 2) or theta > 0 (theorem 3)");
  bounds->add_option("--alpha", bounds_alpha, "Exploration parameter")->capture_default_str();
  bounds->add_option("--horizon", bounds_n, "Horizon n (theorems 1, 4)")->check(CLI::PositiveNumber)
      ->capture_default_str();
  bounds->add_option("--epsilon", bounds_eps, "Margin for theorem 2 (default: computed)");
  bounds->add_option("--delta", bounds_delta, "Arm separation (theorem 4)")->capture_default_str();
  bounds->add_option("--regret-1", r1, "Regret at the first parameter (theorem 4)")->capture_default_str();
  bounds->add_option("--regret-2", r2, "Regret at the second parameter (theorem 4)")->capture_default_str();

  // omega
  auto* omega_cmd = app.add_subcommand("omega", "Threshold function omega(x) or omega2(x)");
  double omega_x = 1.0;
  bool omega_two = false;
  omega_cmd->add_option("--x", omega_x, "Argument x > 0")->required();
  omega_cmd->add_flag("--two", omega_two, "Use the log-log variant");

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "Published experiment presets");
  std::string preset;
  RunFlags repro_flags;
  reproduce->add_option("preset", preset, "Preset")
      ->check(CLI::IsMember({"fig-a-sweep", "fig-b-sweep", "fig-c-sweep", "fig-a-horizon"}))
      ->required();
  repro_flags.add_to(reproduce, false, 500);

  // concentration-test
  auto* conc = app.add_subcommand("concentration-test", "Empirical check of the sample-mean deviation bound");
  std::uint64_t conc_n = 8;
  double conc_eps = 1.0;
  double conc_sigma2 = 1.0;
  std::size_t conc_trials = 100000;
  std::uint64_t conc_seed = 0;
  conc->add_option("--n", conc_n, "Samples per mean")->check(CLI::PositiveNumber)->capture_default_str();
  conc->add_option("--epsilon", conc_eps, "Deviation")->check(CLI::PositiveNumber)->capture_default_str();
  conc->add_option("--sigma2", conc_sigma2, "Noise variance")->check(CLI::PositiveNumber)->capture_default_str();
  conc->add_option("--trials", conc_trials, "Trials")->check(CLI::PositiveNumber)->capture_default_str();
  conc->add_option("--seed", conc_seed, "Base seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const auto bandit = run_problem.load();
      const auto kind = *parse_policy_kind(run_algo);
      if (kind == PolicyKind::kPhased && run_alpha) throw UsageError("policy 'phased' has a fixed alpha");
      PolicySpec spec{kind, run_alpha.value_or(default_alpha(kind)), run_flags.mode()};
      if (!(spec.alpha > 0.0)) throw UsageError("alpha must be positive");
      ExperimentConfig cfg = base_config(run_problem, run_flags);
      cfg.policies = {spec};
      cfg.thetas = {run_theta};
      const ExperimentResult res = run_experiment(cfg, bandit);
      emit(horizon_table(res), run_flags.out, out);
      const RegretCurve& curve = res.curves[0][0];
      out << (run_flags.out.empty() ? "# " : "") << "terminal mean regret " << format_number(curve.terminal_mean())
          << " standard error " << format_number(curve.standard_error(curve.checkpoints.size() - 1)) << '\n';
      return 0;
    }
    if (*sweep) {
      const auto bandit = sweep_problem.load();
      ExperimentConfig cfg = base_config(sweep_problem, sweep_flags);
      cfg.checkpoints = {sweep_flags.horizon};
      cfg.policies.clear();
      for (const auto& a : algos) cfg.policies.push_back(parse_policy_token(a, sweep_flags.mode()));
      if (theta_steps > 1 && !(theta_min < theta_max)) throw UsageError("--theta-min must be below --theta-max");
      cfg.thetas = sweep_thetas(theta_min, theta_max, theta_steps);
      emit(sweep_table(run_experiment(cfg, bandit)), sweep_flags.out, out);
      return 0;
    }
    if (*classify) {
      const auto bandit = classify_problem.load();
      if (bandit->arms() != 2) throw UsageError("classification needs a two-armed problem");
      if (!bandit->space().is_interval()) throw UsageError("classification needs an interval problem");
      out << "# problem " << bandit->name() << "\n# columns: theta label detail\n";
      for (double x : uniform_grid(bandit->space().lower(), bandit->space().upper(), grid)) {
        const auto m = bandit->means_at(x);
        out << format_number(x) << ' ';
        if (m[0] == m[1]) {
          out << "degenerate -\n";
          continue;
        }
        const ThetaClass c = classify_parameter(*bandit, x);
        out << label_name(c.label);
        if (c.epsilon) out << " epsilon=" << format_number(*c.epsilon);
        if (c.witness) out << " witness=" << format_number(*c.witness);
        if (!c.epsilon && !c.witness) out << " -";
        out << '\n';
      }
      return 0;
    }
    if (*bounds) {
      if (theorem == 3) {
        if (!bounds_theta) throw UsageError("theorem 3 needs --theta");
        out << format_number(symmetric_lower_bound(*bounds_theta)) << '\n';
        return 0;
      }
      if (theorem == 4) {
        const TradeoffFloors f = tradeoff_lower_bounds(bounds_delta, bounds_n, r1, r2);
        out << format_number(f.first) << ' ' << format_number(f.second) << '\n';
        return 0;
      }
      if (!bounds_theta) throw UsageError("theorems 1 and 2 need --theta");
      const auto bandit = bounds_problem.load();
      const GapProfile g = bandit->gap_profile(*bounds_theta);
      if (theorem == 1) {
        out << format_number(theorem1_bound({g, bounds_n, bounds_alpha, bandit->sigma2(), bandit->arms()})) << '\n';
        return 0;
      }
      if (!g.delta_min) throw std::runtime_error("all arms are optimal at this parameter; the regret is zero");
      double eps = 0.0;
      if (bounds_eps) {
        eps = *bounds_eps;
      } else {
        const EpsilonResult r = finite_regret_epsilon(*bandit, *bounds_theta);
        if (!r.epsilon) throw std::runtime_error("no positive margin exists at this parameter");
        eps = *r.epsilon;
      }
      const std::uint64_t w = omega_star(eps, *g.delta_min, bounds_alpha, bandit->arms(), bandit->sigma2());
      out << format_number(theorem2_bound(g, w, bandit->sigma2(), bandit->arms())) << '\n';
      return 0;
    }
    if (*omega_cmd) {
      out << (omega_two ? omega2(omega_x) : omega(omega_x)) << '\n';
      return 0;
    }
    if (*reproduce) {
      const Preset p = preset_for(preset);
      ProblemFlags pf;
      pf.name = p.problem;
      const auto bandit = pf.load();
      RunFlags rf = repro_flags;
      rf.horizon = p.horizon;
      ExperimentConfig cfg = base_config(pf, rf);
      cfg.policies = {PolicySpec{PolicyKind::kUcbs, 4.0, rf.mode()}, PolicySpec{PolicyKind::kUcb, 2.0, rf.mode()}};
      if (p.horizon_curve) {
        cfg.thetas = {p.theta_min};
        cfg.checkpoints = linear_checkpoints(p.horizon, 100);
        emit(horizon_table(run_experiment(cfg, bandit)), rf.out, out);
      } else {
        cfg.thetas = sweep_thetas(p.theta_min, p.theta_max, p.steps);
        cfg.checkpoints = {p.horizon};
        emit(sweep_table(run_experiment(cfg, bandit)), rf.out, out);
      }
      return 0;
    }
    if (*conc) {
      const double freq = concentration_frequency(conc_n, conc_eps, conc_sigma2, conc_trials, conc_seed);
      const double bound = deviation_bound(conc_eps, conc_n, conc_sigma2);
      out << "empirical " << format_number(freq) << " bound " << format_number(bound) << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace sbandit::cli
