#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vcoop/analytic.hpp"
#include "vcoop/channel.hpp"
#include "vcoop/model.hpp"
#include "vcoop/sim.hpp"

namespace vcoop {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Axis { D, WI, Rho2 };

/// Config-unit column name: d_km, wI_mbps, rho2_veh_per_m.
const char* axis_name(Axis a);
/// Accepts d, w_I, rho2 or the config-unit names.
std::optional<Axis> parse_axis(const std::string& name);

/// What the rows measure. V2VApprox reports the cluster-approximated V2V
/// term against the sampled gap-sum, both divided by the expected cycle time.
enum class Measure { Throughput, V2VApprox };

struct ModeSet {
  bool analytic = true;
  bool sampled = false;
  bool event = false;
};

struct SweepSpec {
  Scenario base;
  ModelConfig models;
  Axis axis = Axis::D;
  std::vector<double> values;  // config units, strictly increasing
  ModeSet modes;
  std::size_t n_cycles = 2000;
  std::uint64_t master_seed = 0;
  SampledOptions sampled;
  Measure measure = Measure::Throughput;
};

struct ResultRow {
  double axis_value = 0.0;
  RegimeKind regime = RegimeKind::InfrastructureLimited;
  std::optional<double> eta_analytic;  // point regimes
  std::optional<double> eta_lower;     // transitional
  std::optional<double> eta_upper;
  std::optional<Summary> sampled;
  std::optional<Summary> event;
  std::optional<double> ratio_noncoop;
};

/// Scenario at one axis value (config units). Throws ValidationError
/// prefixed with the offending axis value.
Scenario scenario_at(const Scenario& base, Axis axis, double value);

std::vector<std::string> sweep_violations(const SweepSpec& spec);

/// One row per axis value, in axis order. Points run on up to `workers`
/// threads; the rows do not depend on the worker count.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, unsigned workers = 1);

struct Series {
  std::string label;
  SweepSpec spec;
};

struct FigurePreset {
  std::string name;
  std::vector<Series> series;
};

const std::vector<std::string>& preset_names();

/// Throws PreconditionError listing the valid names for an unknown preset.
FigurePreset figure_preset(const std::string& name, std::uint64_t master_seed = 0);

/// Sets n_cycles and master_seed on every series.
void override_run(FigurePreset& preset, std::optional<std::size_t> n_cycles,
                  std::optional<std::uint64_t> master_seed);

struct AverageRates {
  double w_I = 0.0;
  double w_V = 0.0;
};

/// Mean effective V2I and V2V rates of `traverses` independent link traverses.
AverageRates measure_average_rates(const RayleighPathLoss& ch, double r_I, double r0,
                                   std::size_t traverses, std::uint64_t seed);

/// Canonical text of everything that determines a preset's output.
std::string canonical_text(const FigurePreset& preset);
std::uint64_t fnv1a64(const std::string& text);

std::string csv_header();
std::string format_row(Axis axis, const ResultRow& row);
/// Full CSV: provenance comment, header, then a "# series" comment before
/// each series' rows.
std::string preset_csv(const FigurePreset& preset, const std::vector<std::vector<ResultRow>>& rows);
std::string sweep_csv(const SweepSpec& spec, const std::vector<ResultRow>& rows);

/// Runs every series of the preset and renders the CSV.
std::string run_preset(const FigurePreset& preset, unsigned workers = 1);

/// Shortest round-trip decimal form.
std::string format_number(double x);

}  // namespace vcoop
