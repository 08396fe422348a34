#include "vcoop/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vcoop/analytic.hpp"
#include "vcoop/config_io.hpp"
#include "vcoop/experiments.hpp"
#include "vcoop/lp_check.hpp"
#include "vcoop/sim.hpp"

namespace vcoop {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 1562500 -> "1.5625e6"
std::string sci(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  std::string s(buf, res.ptr);
  const auto e = s.find('e');
  std::string mant = s.substr(0, e);
  std::string exp = s.substr(e + 1);
  bool neg = false;
  if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
    neg = exp[0] == '-';
    exp.erase(0, 1);
  }
  exp.erase(0, std::min(exp.find_first_not_of('0'), exp.size() - 1));
  return mant + "e" + (neg ? "-" : "") + exp;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

// "lo:hi:step" or "a,b,c"
std::vector<double> parse_values(const std::string& text) {
  const auto num = [&](const std::string& t) {
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw ValidationError({"bad number '" + t + "' in sweep values"});
    }
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError({"sweep range must be lo:hi:step"});
    const double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
    if (!(step > 0.0) || !(hi >= lo)) throw ValidationError({"sweep range needs step > 0 and hi >= lo"});
    const double count = std::floor((hi - lo) / step + 1e-9);
    if (count > 1e6) throw ValidationError({"sweep range has too many points"});
    for (double i = 0; i <= count; i += 1.0) out.push_back(lo + i * step);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(num(p));
  }
  return out;
}

std::pair<Axis, std::vector<double>> parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ValidationError({"sweep must look like axis=lo:hi:step"});
  const auto axis = parse_axis(text.substr(0, eq));
  if (!axis) throw ValidationError({"unknown sweep axis " + text.substr(0, eq) + " (expected d, w_I or rho2)"});
  return {*axis, parse_values(text.substr(eq + 1))};
}

ModelConfig models_or_default(const std::string& path) {
  return path.empty() ? ModelConfig{} : load_models_file(path);
}

SimMode parse_mode(const std::string& m) {
  if (m == "sampled") return SimMode::SampledSchedule;
  if (m == "event") return SimMode::EventDriven;
  throw ValidationError({"unknown mode " + m + " (expected sampled or event)"});
}

// ---- verbs ---------------------------------------------------------------

int cmd_validate(const std::string& config, std::ostream& out) {
  const Scenario s = load_scenario_file(config);
  const Regime r = classify_regime(s);
  out << scenario_to_json(s) << '\n';
  out << to_string(r.kind) << ", w_lo=" << sci(r.w_lo) << ", w_hi=" << sci(r.w_hi) << '\n';
  const double rm = rho_min(s);
  if (s.rho2 == 0.0) {
    out << "rho2 = 0: no helpers, non-cooperative throughput only\n";
  } else if (s.rho2 >= rm) {
    out << "rho2 = " << format_number(s.rho2) << " veh/m >= rho_min = " << sci(rm)
        << " veh/m: closed forms valid\n";
  } else {
    out << "rho2 = " << format_number(s.rho2) << " veh/m < rho_min = " << sci(rm)
        << " veh/m: closed-form V2V terms clamp to 0\n";
  }
  return kExitOk;
}

std::string analytic_header() {
  return "axis,value,regime,w_lo,w_hi,e_cycle_time_s,e_v2i_bits,e_v2v_bits,e_v2v_lower_bits,"
         "e_v2v_upper_bits,eta_analytic,eta_lower,eta_upper,eta_noncoop,transition_point,rho_min";
}

std::string analytic_row(const Scenario& s, const std::string& axis, const std::string& value) {
  const ThroughputBreakdown b = throughput(s);
  std::string line = axis + ',' + value + ',' + to_string(b.regime.kind);
  const auto add = [&](std::optional<double> v) {
    line += ',';
    if (v) line += format_number(*v);
  };
  add(b.regime.w_lo);
  add(b.regime.w_hi);
  add(b.e_cycle_time);
  add(b.e_v2i_data);
  const bool bounds = std::holds_alternative<Bounds>(b.eta);
  add(bounds ? std::nullopt : std::optional<double>(std::get<double>(b.e_v2v_data)));
  add(bounds ? std::optional<double>(lower_of(b.e_v2v_data)) : std::nullopt);
  add(bounds ? std::optional<double>(upper_of(b.e_v2v_data)) : std::nullopt);
  add(bounds ? std::nullopt : std::optional<double>(std::get<double>(b.eta)));
  add(bounds ? std::optional<double>(lower_of(b.eta)) : std::nullopt);
  add(bounds ? std::optional<double>(upper_of(b.eta)) : std::nullopt);
  add(noncooperative_throughput(s));
  add(bounds ? std::optional<double>(b.transition_point) : std::nullopt);
  add(rho_min(s));
  return line;
}

int cmd_analytic(const std::string& config, const std::string& sweep, const std::string& out_path,
                 std::ostream& out) {
  const Scenario s = load_scenario_file(config);
  std::string text = analytic_header() + '\n';
  if (sweep.empty()) {
    text += analytic_row(s, "", "") + '\n';
  } else {
    const auto [axis, values] = parse_sweep(sweep);
    std::vector<std::string> rows;
    std::vector<std::string> problems;
    for (double v : values) {
      try {
        rows.push_back(analytic_row(scenario_at(s, axis, v), axis_name(axis), format_number(v)));
      } catch (const ValidationError& e) {
        problems.insert(problems.end(), e.violations().begin(), e.violations().end());
      }
    }
    if (!problems.empty()) throw ValidationError(problems);
    for (const auto& r : rows) text += r + '\n';
  }
  write_output(text, out_path, out);
  return kExitOk;
}

struct SimulateArgs {
  std::string config, models, mode = "sampled", trace;
  std::size_t cycles = 2000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (!a.seed) throw UsageError("--seed is required");
  if (a.cycles < 30) throw ValidationError({"--cycles must be at least 30"});
  const Scenario s = load_scenario_file(a.config);
  const ModelConfig m = models_or_default(a.models);
  const SimMode mode = parse_mode(a.mode);
  const EstimateRun run = simulate(s, m, mode, a.cycles, *a.seed, a.workers);
  const ThroughputEstimate& e = run.estimate;
  nlohmann::ordered_json doc;
  doc["mean"] = e.mean;
  doc["std_err"] = e.std_err;
  doc["ci95"] = {e.ci_lo, e.ci_hi};
  doc["n_cycles"] = e.n_cycles;
  doc["mode"] = a.mode;
  doc["master_seed"] = e.master_seed;
  doc["regime"] = to_string(classify_regime(s).kind);
  out << doc.dump() << '\n';
  if (!a.trace.empty()) {
    std::string text = "cycle_index,duration_s,v2i_bits,v2v_bits,helper_count,cluster_count\n";
    for (std::size_t i = 0; i < run.traces.size(); ++i) {
      const CycleTrace& t = run.traces[i];
      text += std::to_string(i) + ',' + format_number(t.duration) + ',' + format_number(t.v2i_bits) + ',' +
              format_number(t.v2v_bits) + ',' + std::to_string(t.helper_count) + ',' +
              std::to_string(t.cluster_count) + '\n';
    }
    write_output(text, a.trace, out);
  }
  return kExitOk;
}

int cmd_lp_check(std::size_t trials, std::size_t n_max, std::uint64_t seed, const std::string& regime,
                 std::ostream& out) {
  if (trials < 1) throw UsageError("--trials must be at least 1");
  if (n_max < 1) throw UsageError("--n-max must be at least 1");
  std::vector<RegimeKind> kinds;
  if (regime == "all") {
    kinds = {RegimeKind::InfrastructureLimited, RegimeKind::V2VLimited, RegimeKind::Transitional};
  } else if (const auto k = parse_regime(regime)) {
    kinds = {*k};
  } else {
    throw UsageError("unknown regime " + regime + " (expected infra, v2v, transitional or all)");
  }
  bool ok = true;
  out << "regime,trials,max_rel_deviation,max_sandwich_violation,checker_failures,status\n";
  for (RegimeKind k : kinds) {
    const LpCheckReport r = run_lp_check(k, trials, n_max, seed);
    const bool pass = r.passed();
    ok = ok && pass;
    out << to_string(k) << ',' << r.trials << ',' << sci(r.max_rel_deviation) << ','
        << sci(r.max_sandwich_violation) << ',' << r.checker_failures << ',' << (pass ? "PASS" : "FAIL")
        << '\n';
  }
  return ok ? kExitOk : kExitRuntime;
}

struct SweepArgs {
  std::string config, models, sweep, modes = "analytic", out;
  std::size_t cycles = 2000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepSpec sp;
  sp.base = load_scenario_file(a.config);
  sp.models = models_or_default(a.models);
  const auto [axis, values] = parse_sweep(a.sweep);
  sp.axis = axis;
  sp.values = values;
  sp.modes = ModeSet{false, false, false};
  std::stringstream ss(a.modes);
  for (std::string m; std::getline(ss, m, ',');) {
    if (m == "analytic") sp.modes.analytic = true;
    else if (m == "sampled") sp.modes.sampled = true;
    else if (m == "event") sp.modes.event = true;
    else throw ValidationError({"unknown mode " + m + " (expected analytic, sampled or event)"});
  }
  if ((sp.modes.sampled || sp.modes.event) && !a.seed) throw UsageError("--seed is required for simulated modes");
  sp.n_cycles = a.cycles;
  sp.master_seed = a.seed.value_or(0);
  write_output(sweep_csv(sp, run_sweep(sp, a.workers)), a.out, out);
  return kExitOk;
}

struct FigureArgs {
  std::string preset, out_dir;
  std::optional<std::size_t> cycles;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

int cmd_figure(const FigureArgs& a, std::ostream& out) {
  if (!a.seed) throw UsageError("--seed is required");
  if (a.cycles && *a.cycles < 30) throw ValidationError({"--cycles must be at least 30"});
  FigurePreset p = figure_preset(a.preset, *a.seed);
  override_run(p, a.cycles, a.seed);
  const std::string csv = run_preset(p, a.workers);
  if (a.out_dir.empty()) {
    out << csv;
  } else {
    std::filesystem::create_directories(a.out_dir);
    const std::string path = (std::filesystem::path(a.out_dir) / (a.preset + ".csv")).string();
    write_output(csv, path, out);
    out << path << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cooperative vehicular download throughput: analysis, optimizer checks, simulation"};
  app.name("vcoop");
  app.require_subcommand(1, 1);

  std::string config;
  auto* validate = app.add_subcommand("validate", "check a scenario config and report its regime");
  validate->add_option("config,--config", config, "scenario JSON")->required();

  std::string sweep, out_path;
  auto* analytic = app.add_subcommand("analytic", "closed-form throughput as CSV");
  analytic->add_option("config,--config", config, "scenario JSON")->required();
  analytic->add_option("--sweep", sweep, "axis=lo:hi:step or axis=v1,v2,...");
  analytic->add_option("--out", out_path, "write CSV here instead of stdout");

  SimulateArgs sim;
  std::uint64_t seed_value = 0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo throughput estimate as JSON");
  simulate_cmd->add_option("config,--config", sim.config, "scenario JSON")->required();
  simulate_cmd->add_option("--models", sim.models, "model JSON");
  simulate_cmd->add_option("--mode", sim.mode, "sampled or event");
  simulate_cmd->add_option("--cycles", sim.cycles, "number of cycles (>= 30)");
  auto* sim_seed = simulate_cmd->add_option("--seed", seed_value, "master seed");
  simulate_cmd->add_option("--trace", sim.trace, "per-cycle CSV output path");
  simulate_cmd->add_option("--workers", sim.workers, "worker threads")->check(CLI::PositiveNumber);

  std::size_t trials = 500, n_max = 8;
  std::uint64_t lp_seed = 1;
  std::string regime = "all";
  auto* lp = app.add_subcommand("lp-check", "closed-form schedules against the LP optimum");
  lp->add_option("--trials", trials, "random instances per regime");
  lp->add_option("--n-max", n_max, "largest helper count");
  lp->add_option("--seed", lp_seed, "seed");
  lp->add_option("--regime", regime, "infra, v2v, transitional or all");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep as CSV");
  sweep_cmd->add_option("config,--config", sw.config, "scenario JSON")->required();
  sweep_cmd->add_option("--models", sw.models, "model JSON");
  sweep_cmd->add_option("--sweep", sw.sweep, "axis=lo:hi:step or axis=v1,v2,...")->required();
  sweep_cmd->add_option("--modes", sw.modes, "comma list of analytic, sampled, event");
  sweep_cmd->add_option("--cycles", sw.cycles, "cycles per simulated point");
  auto* sweep_seed = sweep_cmd->add_option("--seed", seed_value, "master seed");
  sweep_cmd->add_option("--workers", sw.workers, "worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sw.out, "write CSV here instead of stdout");

  FigureArgs fig;
  std::size_t fig_cycles = 0;
  auto* figure = app.add_subcommand("figure", "regenerate a figure dataset as CSV");
  figure->add_option("--preset", fig.preset, "fig4a, fig4b, fig4c, fig5, fig7, fig8, fig10, eval_approx")
      ->required();
  figure->add_option("--out", fig.out_dir, "output directory");
  auto* fig_cycles_opt = figure->add_option("--cycles", fig_cycles, "cycles per simulated point");
  auto* fig_seed = figure->add_option("--seed", seed_value, "master seed");
  figure->add_option("--workers", fig.workers, "worker threads")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (*validate) return cmd_validate(config, out);
    if (*analytic) return cmd_analytic(config, sweep, out_path, out);
    if (*simulate_cmd) {
      if (*sim_seed) sim.seed = seed_value;
      return cmd_simulate(sim, out);
    }
    if (*lp) return cmd_lp_check(trials, n_max, lp_seed, regime, out);
    if (*sweep_cmd) {
      if (*sweep_seed) sw.seed = seed_value;
      return cmd_sweep(sw, out);
    }
    if (*figure) {
      if (*fig_seed) fig.seed = seed_value;
      if (*fig_cycles_opt) fig.cycles = fig_cycles;
      return cmd_figure(fig, out);
    }
  } catch (const ValidationError& e) {
    err << "error:\n";
    for (const auto& v : e.violations()) err << "  " << v << '\n';
    return kExitValidation;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace vcoop
