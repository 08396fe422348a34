#include "vcoop/lp_check.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "vcoop/optimizer.hpp"
#include "vcoop/rng.hpp"

namespace vcoop {

LpInstance random_instance(RegimeKind regime, std::size_t n_max, std::uint64_t seed, std::size_t trial) {
  Stream st(derive_seed(seed, trial, Component::LpCheck));
  LpInstance inst;
  Scenario& s = inst.scenario;
  s = reference_scenario();
  const Regime band = classify_regime(s);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (regime) {
    case RegimeKind::InfrastructureLimited:
      s.w_I = band.w_lo * (1.0 - u(st));  // (0, w_lo]
      break;
    case RegimeKind::V2VLimited:
      s.w_I = band.w_hi * (1.0 + u(st));
      break;
    case RegimeKind::Transitional: {
      double x = u(st);
      while (!(x > 0.0)) x = u(st);
      s.w_I = band.w_lo + (band.w_hi - band.w_lo) * x;
      break;
    }
  }
  std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, n_max));
  const std::size_t n = count(st);
  const double mean_gap = 100.0 + 1400.0 * u(st);
  std::exponential_distribution<double> gap(1.0 / mean_gap);
  inst.helpers.count = n;
  inst.helpers.first_offset = u(st) * 1000.0;
  for (std::size_t i = 1; i < n; ++i) inst.helpers.gaps.push_back(gap(st));
  return inst;
}

bool LpCheckReport::passed(double tol) const {
  return max_rel_deviation <= tol && max_sandwich_violation <= tol && checker_failures == 0;
}

LpCheckReport run_lp_check(RegimeKind regime, std::size_t trials, std::size_t n_max, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  LpCheckReport rep;
  rep.regime = regime;
  rep.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    const LpInstance inst = random_instance(regime, n_max, seed, k);
    const Scenario& s = inst.scenario;
    const HelperConfig& cfg = inst.helpers;
    const Schedule opt = solve_cycle_lp(build_cycle_lp(cfg, s));
    const double scale = std::max(opt.total_delivered, 1.0);
    if (!check_schedule(cfg, s, opt).empty()) ++rep.checker_failures;
    if (regime == RegimeKind::Transitional) {
      const TransitionalBounds b = transitional_cycle_bounds(cfg, s);
      const double v = std::max({0.0, b.lower - opt.total_delivered, opt.total_delivered - b.upper});
      rep.max_sandwich_violation = std::max(rep.max_sandwich_violation, v / scale);
      if (!check_schedule(cfg, s, b.schedule_for_lower).empty()) ++rep.checker_failures;
    } else {
      const Schedule closed =
          regime == RegimeKind::InfrastructureLimited ? schedule_theorem1(cfg, s) : schedule_theorem2(cfg, s);
      rep.max_rel_deviation =
          std::max(rep.max_rel_deviation, std::abs(closed.total_delivered - opt.total_delivered) / scale);
      if (!check_schedule(cfg, s, closed).empty()) ++rep.checker_failures;
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::optional<RegimeKind> parse_regime(const std::string& name) {
  if (name == "infra" || name == "infrastructure") return RegimeKind::InfrastructureLimited;
  if (name == "v2v") return RegimeKind::V2VLimited;
  if (name == "transitional") return RegimeKind::Transitional;
  return std::nullopt;
}

}  // namespace vcoop
