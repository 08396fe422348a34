#include <algorithm>
#include <cmath>

#include "vcoop/analytic.hpp"
#include "vcoop/optimizer.hpp"
#include "vcoop/sim.hpp"

namespace vcoop {
namespace {

std::size_t count_clusters(const HelperConfig& cfg, double radius) {
  if (cfg.count == 0) return 0;
  std::size_t k = 1;
  for (double g : cfg.gaps) {
    if (g > 2.0 * radius) ++k;
  }
  return k;
}

}  // namespace

const char* to_string(SimMode mode) {
  return mode == SimMode::SampledSchedule ? "SampledSchedule" : "EventDriven";
}

HelperConfig generate_helpers(double rho2, double span, Stream& stream) {
  HelperConfig cfg;
  if (!(rho2 > 0.0) || !(span > 0.0)) return cfg;
  std::poisson_distribution<long long> count(rho2 * span);
  const auto n = static_cast<std::size_t>(count(stream));
  std::uniform_real_distribution<double> at(0.0, span);
  std::vector<double> x(n);
  for (auto& p : x) p = at(stream);
  std::sort(x.begin(), x.end());
  cfg.count = n;
  if (n == 0) return cfg;
  cfg.first_offset = x.front();
  cfg.gaps.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) cfg.gaps.push_back(x[i] - x[i - 1]);
  return cfg;
}

CycleTrace run_cycle_sampled(const Scenario& s, Stream& stream, const SampledOptions& opt) {
  CycleTrace t;
  t.duration = expected_cycle_time(s);
  t.v2i_bits = expected_v2i_data(s);
  const HelperConfig cfg = generate_helpers(s.rho2, relative_span(s), stream);
  t.helper_count = cfg.count;

  if (opt.gap_sum_only) {
    double m = 0.0;
    for (double g : cfg.gaps) m += std::min(g, 2.0 * s.r_I);
    t.v2i_bits = 0.0;
    t.v2v_bits = m * s.w_I / s.v2;
    t.cluster_count = count_clusters(cfg, s.r_I);
    return t;
  }

  const Regime reg = classify_regime(s);
  switch (reg.kind) {
    case RegimeKind::InfrastructureLimited:
      t.v2v_bits = schedule_theorem1(cfg, s).total_delivered;
      t.cluster_count = count_clusters(cfg, s.r_I);
      break;
    case RegimeKind::V2VLimited:
      t.v2v_bits = schedule_theorem2(cfg, s).total_delivered;
      t.cluster_count = count_clusters(cfg, s.r0);
      break;
    case RegimeKind::Transitional: {
      const TransitionalBounds b = transitional_cycle_bounds(cfg, s);
      t.v2v_lower = b.lower;
      t.v2v_upper = b.upper;
      t.v2v_bits = b.lower;
      if (opt.transitional_optimum) {
        const CycleOptimum best = cycle_optimum(cfg, s, opt.lp_cap);
        t.v2v_bits = best.schedule.total_delivered;
        t.lp_fallback = best.flow_blocks > 0;
      }
      t.cluster_count = count_clusters(cfg, s.r0 * s.w_V * s.v2 / (s.w_I * (s.v1 + s.v2)));
      break;
    }
  }
  return t;
}

}  // namespace vcoop
