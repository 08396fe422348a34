#include <cmath>

#include "vcoop/sim.hpp"

namespace vcoop {

Summary summarize(const std::vector<CycleTrace>& traces) {
  const std::size_t n = traces.size();
  if (n < 30) throw PreconditionError("summarize needs at least 30 cycles, got " + std::to_string(n));
  double bits = 0.0, time = 0.0;
  for (const auto& t : traces) {
    bits += t.v2i_bits + t.v2v_bits;
    time += t.duration;
  }
  Summary out;
  out.mean = bits / time;

  // jackknife over leave-one-out ratios, shifted by the first so identical
  // traces give exactly zero
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = traces[i];
    loo[i] = (bits - (t.v2i_bits + t.v2v_bits)) / (time - t.duration);
  }
  double shift_mean = 0.0;
  for (double r : loo) shift_mean += r - loo[0];
  shift_mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double r : loo) {
    const double dev = (r - loo[0]) - shift_mean;
    ss += dev * dev;
  }
  out.std_err = std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
  out.ci_lo = out.mean - 1.96 * out.std_err;
  out.ci_hi = out.mean + 1.96 * out.std_err;
  return out;
}

EstimateRun simulate(const Scenario& s, const ModelConfig& m, SimMode mode, std::size_t n_cycles,
                     std::uint64_t master_seed, unsigned workers, const SampledOptions& opt) {
  require_valid(s);
  require_valid(m);
  if (n_cycles < 30) throw PreconditionError("at least 30 cycles are required");

  EstimateRun run;
  if (mode == SimMode::SampledSchedule) {
    run.traces.resize(n_cycles);
    parallel_for(n_cycles, workers, [&](std::size_t i) {
      Stream st(derive_seed(master_seed, i, Component::SampledCycle));
      run.traces[i] = run_cycle_sampled(s, st, opt);
    });
  } else {
    const int horizon = s.num_infra - 1;
    if (horizon < 3) throw PreconditionError("num_infra must be at least 4 for event-driven runs");
    const std::size_t per_rep = static_cast<std::size_t>(horizon - 2);
    const std::size_t reps = (n_cycles + per_rep - 1) / per_rep;
    std::vector<std::vector<CycleTrace>> parts(reps);
    parallel_for(reps, workers, [&](std::size_t r) {
      parts[r] = run_event_driven(s, m, horizon, derive_seed(master_seed, r, Component::EventHelpers));
    });
    for (auto& p : parts) {
      for (auto& t : p) {
        if (run.traces.size() == n_cycles) break;
        run.traces.push_back(t);
      }
    }
  }

  const Summary sum = summarize(run.traces);
  run.estimate.mean = sum.mean;
  run.estimate.std_err = sum.std_err;
  run.estimate.ci_lo = sum.ci_lo;
  run.estimate.ci_hi = sum.ci_hi;
  run.estimate.n_cycles = run.traces.size();
  run.estimate.mode = mode;
  run.estimate.master_seed = master_seed;
  return run;
}

ThroughputEstimate estimate_throughput(const Scenario& s, const ModelConfig& m, SimMode mode,
                                       std::size_t n_cycles, std::uint64_t master_seed,
                                       unsigned workers, const SampledOptions& opt) {
  return simulate(s, m, mode, n_cycles, master_seed, workers, opt).estimate;
}

}  // namespace vcoop
