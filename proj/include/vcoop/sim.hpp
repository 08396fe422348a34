#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vcoop/channel.hpp"
#include "vcoop/model.hpp"
#include "vcoop/rng.hpp"

namespace vcoop {

struct CycleTrace {
  double v2i_bits = 0.0;
  double v2v_bits = 0.0;
  double duration = 0.0;
  std::size_t helper_count = 0;
  std::size_t cluster_count = 0;
  // Transitional sampled cycles only.
  std::optional<double> v2v_lower;
  std::optional<double> v2v_upper;
  bool lp_fallback = false;  // some block exceeded lp_cap and went to max-flow
};

enum class SimMode { SampledSchedule, EventDriven };

const char* to_string(SimMode mode);

struct Summary {
  double mean = 0.0;
  double std_err = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct ThroughputEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t n_cycles = 0;
  SimMode mode = SimMode::SampledSchedule;
  std::uint64_t master_seed = 0;
};

struct SampledOptions {
  std::size_t lp_cap = 64;
  // In the transitional regime solve each cycle exactly; otherwise report
  // the per-cycle lower-bound schedule as the delivered amount.
  bool transitional_optimum = true;
  // Report only the gap-sum V2V term sum_{i<n} min(l_i, 2 r_I) w_I / v2 with
  // no V2I part, for checking the cluster approximation.
  bool gap_sum_only = false;
};

/// n ~ Poisson(rho2 * span), positions uniform and sorted on [0, span].
HelperConfig generate_helpers(double rho2, double span, Stream& stream);

CycleTrace run_cycle_sampled(const Scenario& s, Stream& stream, const SampledOptions& opt = {});

/// Simulates horizon_cycles cycles past horizon_cycles + 1 infrastructure
/// points and returns the traces of all but the first and last.
std::vector<CycleTrace> run_event_driven(const Scenario& s, const ModelConfig& m,
                                         int horizon_cycles, std::uint64_t seed);

/// Ratio-of-means estimate with jackknife standard error. Needs >= 30 traces.
Summary summarize(const std::vector<CycleTrace>& traces);

struct EstimateRun {
  ThroughputEstimate estimate;
  std::vector<CycleTrace> traces;
};

EstimateRun simulate(const Scenario& s, const ModelConfig& m, SimMode mode, std::size_t n_cycles,
                     std::uint64_t master_seed, unsigned workers = 1,
                     const SampledOptions& opt = {});

ThroughputEstimate estimate_throughput(const Scenario& s, const ModelConfig& m, SimMode mode,
                                       std::size_t n_cycles, std::uint64_t master_seed,
                                       unsigned workers = 1, const SampledOptions& opt = {});

/// Runs f(0..count-1) on up to `workers` threads.
template <class F>
void parallel_for(std::size_t count, unsigned workers, F&& f);

}  // namespace vcoop

#include "vcoop/detail/parallel.hpp"
