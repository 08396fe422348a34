#include "vcoop/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vcoop/config_io.hpp"

namespace vcoop {
namespace {

const std::vector<double> kDistancesKm = {2, 5, 8, 10, 15, 20, 30, 40, 50};

std::vector<double> wi_grid() {
  std::vector<double> v;
  for (int i = 1; i <= 20; ++i) v.push_back(0.5 * i);
  return v;
}

SweepSpec d_sweep(double w_I, double rho2, ModeSet modes) {
  SweepSpec sp;
  sp.base = reference_scenario();
  sp.base.w_I = w_I;
  sp.base.rho2 = rho2;
  sp.axis = Axis::D;
  sp.values = kDistancesKm;
  sp.modes = modes;
  return sp;
}

std::string rho_label(double rho2) { return "rho2_veh_per_m=" + format_number(rho2); }

std::string modes_text(const ModeSet& m) {
  std::string out;
  if (m.analytic) out += "analytic ";
  if (m.sampled) out += "sampled ";
  if (m.event) out += "event ";
  return out;
}

void append_cell(std::string& line, const std::optional<double>& v) {
  line += ',';
  if (v) line += format_number(*v);
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::D: return "d_km";
    case Axis::WI: return "wI_mbps";
    case Axis::Rho2: return "rho2_veh_per_m";
  }
  return "?";
}

std::optional<Axis> parse_axis(const std::string& name) {
  if (name == "d" || name == "d_km") return Axis::D;
  if (name == "w_I" || name == "wI" || name == "wI_mbps") return Axis::WI;
  if (name == "rho2" || name == "rho2_veh_per_m") return Axis::Rho2;
  return std::nullopt;
}

Scenario scenario_at(const Scenario& base, Axis axis, double value) {
  Scenario s = base;
  switch (axis) {
    case Axis::D: s.d = value * 1e3; break;
    case Axis::WI: s.w_I = value * 1e6; break;
    case Axis::Rho2: s.rho2 = value; break;
  }
  auto v = scenario_violations(s);
  if (!std::isfinite(value)) v.insert(v.begin(), "value must be finite");
  if (!v.empty()) {
    for (auto& msg : v) msg = std::string(axis_name(axis)) + "=" + format_number(value) + ": " + msg;
    throw ValidationError(v);
  }
  return s;
}

std::vector<std::string> sweep_violations(const SweepSpec& spec) {
  std::vector<std::string> out;
  if (spec.values.empty()) out.push_back("sweep has no axis values");
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) {
      out.push_back("axis values must be strictly increasing");
      break;
    }
  }
  if (!spec.modes.analytic && !spec.modes.sampled && !spec.modes.event) out.push_back("no mode selected");
  if ((spec.modes.sampled || spec.modes.event) && spec.n_cycles < 30) {
    out.push_back("at least 30 cycles are required");
  }
  for (auto& v : model_violations(spec.models)) out.push_back(std::move(v));
  for (double x : spec.values) {
    try {
      scenario_at(spec.base, spec.axis, x);
    } catch (const ValidationError& e) {
      for (const auto& v : e.violations()) out.push_back(v);
    }
  }
  return out;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, unsigned workers) {
  auto problems = sweep_violations(spec);
  if (!problems.empty()) throw ValidationError(problems);

  const std::size_t n = spec.values.size();
  std::vector<ResultRow> rows(n);
  const unsigned inner = std::max(1u, workers / static_cast<unsigned>(std::max<std::size_t>(1, n)));
  parallel_for(n, workers, [&](std::size_t i) {
    const Scenario s = scenario_at(spec.base, spec.axis, spec.values[i]);
    ResultRow& row = rows[i];
    row.axis_value = spec.values[i];
    const ThroughputBreakdown br = throughput(s);
    row.regime = br.regime.kind;

    if (spec.measure == Measure::V2VApprox) {
      if (spec.modes.analytic) {
        if (row.regime != RegimeKind::InfrastructureLimited) {
          throw PreconditionError("the V2V approximation check needs the infrastructure-limited regime");
        }
        row.eta_analytic = std::get<double>(br.e_v2v_data) / br.e_cycle_time;
      }
      if (spec.modes.sampled) {
        SampledOptions opt = spec.sampled;
        opt.gap_sum_only = true;
        const auto run = simulate(s, spec.models, SimMode::SampledSchedule, spec.n_cycles,
                                  spec.master_seed, inner, opt);
        row.sampled = summarize(run.traces);
      }
      return;
    }

    if (spec.modes.analytic) {
      if (const auto* b = std::get_if<Bounds>(&br.eta)) {
        row.eta_lower = b->lower;
        row.eta_upper = b->upper;
      } else {
        row.eta_analytic = std::get<double>(br.eta);
      }
      const double base = noncooperative_throughput(s);
      if (base > 0.0) row.ratio_noncoop = lower_of(br.eta) / base;
    }
    if (spec.modes.sampled) {
      const auto run = simulate(s, spec.models, SimMode::SampledSchedule, spec.n_cycles,
                                spec.master_seed, inner, spec.sampled);
      row.sampled = summarize(run.traces);
    }
    if (spec.modes.event) {
      const auto run = simulate(s, spec.models, SimMode::EventDriven, spec.n_cycles, spec.master_seed,
                                inner, spec.sampled);
      row.event = summarize(run.traces);
    }
  });
  return rows;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig4a", "fig4b", "fig4c", "fig5",
                                                 "fig7",  "fig8",  "fig10", "eval_approx"};
  return names;
}

AverageRates measure_average_rates(const RayleighPathLoss& ch, double r_I, double r0,
                                   std::size_t traverses, std::uint64_t seed) {
  Stream st(derive_seed(seed, 0, Component::Fading));
  const LinkProfile vi = v2i_profile(ch, r_I);
  const LinkProfile vv = v2v_profile(ch, r0);
  AverageRates avg;
  for (std::size_t i = 0; i < traverses; ++i) {
    avg.w_I += effective_rate(ch, vi, st);
    avg.w_V += effective_rate(ch, vv, st);
  }
  avg.w_I /= static_cast<double>(traverses);
  avg.w_V /= static_cast<double>(traverses);
  return avg;
}

FigurePreset figure_preset(const std::string& name, std::uint64_t master_seed) {
  FigurePreset p;
  p.name = name;
  const ModeSet all{true, true, true};
  const ModeSet analytic_event{true, false, true};

  if (name == "fig4a" || name == "fig4b" || name == "fig4c") {
    const double w_I = name == "fig4a" ? 1e6 : name == "fig4b" ? 6e6 : 2e6;
    const ModeSet modes = name == "fig4c" ? ModeSet{true, true, false} : all;
    for (double rho : {0.004, 0.005, 0.01}) p.series.push_back({rho_label(rho), d_sweep(w_I, rho, modes)});
  } else if (name == "fig5") {
    for (double rho : {0.1, 0.02, 0.005, 0.002, 0.0}) {
      SweepSpec sp;
      sp.base = reference_scenario();
      sp.base.d = 15e3;
      sp.base.rho2 = rho;
      sp.axis = Axis::WI;
      sp.values = wi_grid();
      sp.modes = ModeSet{true, false, false};
      p.series.push_back({rho_label(rho), sp});
    }
  } else if (name == "fig7") {
    SweepSpec base = d_sweep(1e6, 0.005, analytic_event);
    p.series.push_back({"mobility=constant", base});
    base.models.mobility = GaussianSpeed{};
    p.series.push_back({"mobility=gaussian", base});
  } else if (name == "fig8") {
    SweepSpec base = d_sweep(6e6, 0.005, analytic_event);
    p.series.push_back({"connection=unit_disk", base});
    base.models.connection = LogNormal{};
    p.series.push_back({"connection=log_normal", base});
  } else if (name == "fig10") {
    const RayleighPathLoss ch;
    const Scenario ref = reference_scenario();
    const AverageRates avg = measure_average_rates(ch, ref.r_I, ref.r0, 2000, master_seed);
    SweepSpec base = d_sweep(avg.w_I, 0.005, analytic_event);
    base.base.w_V = avg.w_V;
    p.series.push_back({"channel=constant_rate", base});
    base.models.channel = ch;
    p.series.push_back({"channel=rayleigh_path_loss", base});
  } else if (name == "eval_approx") {
    SweepSpec sp = d_sweep(1e6, 0.005, ModeSet{true, true, false});
    sp.measure = Measure::V2VApprox;
    p.series.push_back({"v2v_term=cluster_approximation_vs_gap_sum", sp});
  } else {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw PreconditionError("unknown preset " + name + "; valid presets: " + valid);
  }
  for (auto& s : p.series) s.spec.master_seed = master_seed;
  return p;
}

void override_run(FigurePreset& preset, std::optional<std::size_t> n_cycles,
                  std::optional<std::uint64_t> master_seed) {
  for (auto& s : preset.series) {
    if (n_cycles) s.spec.n_cycles = *n_cycles;
    if (master_seed) s.spec.master_seed = *master_seed;
  }
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string canonical_text(const FigurePreset& preset) {
  std::string out = "preset " + preset.name + "\n";
  for (const auto& s : preset.series) {
    const SweepSpec& sp = s.spec;
    out += "series " + s.label + "\n";
    out += scenario_to_json(sp.base) + "\n";
    out += models_to_json(sp.models) + "\n";
    out += std::string("axis ") + axis_name(sp.axis) + " values";
    for (double v : sp.values) out += " " + format_number(v);
    out += "\nmodes " + modes_text(sp.modes);
    out += "\nmeasure " + std::string(sp.measure == Measure::Throughput ? "throughput" : "v2v_approx");
    out += "\ncycles " + std::to_string(sp.n_cycles) + " seed " + std::to_string(sp.master_seed);
    out += "\nlp_cap " + std::to_string(sp.sampled.lp_cap) +
           " transitional_optimum " + std::to_string(sp.sampled.transitional_optimum) + "\n";
  }
  return out;
}

std::string csv_header() {
  return "axis,value,regime,eta_analytic,eta_lower,eta_upper,eta_sampled,eta_sampled_ci_lo,"
         "eta_sampled_ci_hi,eta_event,eta_event_ci_lo,eta_event_ci_hi,ratio_noncoop";
}

std::string format_row(Axis axis, const ResultRow& row) {
  std::string line = axis_name(axis);
  line += ',' + format_number(row.axis_value) + ',' + to_string(row.regime);
  append_cell(line, row.eta_analytic);
  append_cell(line, row.eta_lower);
  append_cell(line, row.eta_upper);
  const auto cells = [&](const std::optional<Summary>& s) {
    append_cell(line, s ? std::optional<double>(s->mean) : std::nullopt);
    append_cell(line, s ? std::optional<double>(s->ci_lo) : std::nullopt);
    append_cell(line, s ? std::optional<double>(s->ci_hi) : std::nullopt);
  };
  cells(row.sampled);
  cells(row.event);
  append_cell(line, row.ratio_noncoop);
  return line;
}

std::string preset_csv(const FigurePreset& preset, const std::vector<std::vector<ResultRow>>& rows) {
  std::ostringstream out;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_text(preset))));
  const std::uint64_t seed = preset.series.empty() ? 0 : preset.series.front().spec.master_seed;
  out << "# preset=" << preset.name << " sweep_hash=" << hash << " seed=" << seed
      << " version=" << kToolVersion << '\n';
  out << csv_header() << '\n';
  for (std::size_t i = 0; i < preset.series.size(); ++i) {
    out << "# series " << preset.series[i].label << '\n';
    for (const auto& r : rows[i]) out << format_row(preset.series[i].spec.axis, r) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<ResultRow>& rows) {
  FigurePreset p{"sweep", {{"sweep", spec}}};
  return preset_csv(p, {rows});
}

std::string run_preset(const FigurePreset& preset, unsigned workers) {
  std::vector<std::vector<ResultRow>> rows;
  rows.reserve(preset.series.size());
  for (const auto& s : preset.series) rows.push_back(run_sweep(s.spec, workers));
  return preset_csv(preset, rows);
}

}  // namespace vcoop
