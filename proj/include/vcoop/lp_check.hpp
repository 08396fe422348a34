#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vcoop/model.hpp"

namespace vcoop {

/// Random single-cycle instance inside one regime: n uniform in 1..n_max,
/// gaps exponential with a random mean in [100, 1500] m, w_I drawn inside
/// the regime's band on the evaluation highway.
struct LpInstance {
  Scenario scenario;
  HelperConfig helpers;
};

LpInstance random_instance(RegimeKind regime, std::size_t n_max, std::uint64_t seed, std::size_t trial);

struct LpCheckReport {
  RegimeKind regime = RegimeKind::InfrastructureLimited;
  std::size_t trials = 0;
  double max_rel_deviation = 0.0;    // closed form vs LP (point regimes)
  double max_sandwich_violation = 0.0;  // transitional, relative to the LP optimum
  std::size_t checker_failures = 0;  // emitted schedules failing the constraint sweep
  double seconds = 0.0;
  bool passed(double tol = 1e-9) const;
};

LpCheckReport run_lp_check(RegimeKind regime, std::size_t trials, std::size_t n_max, std::uint64_t seed);

std::optional<RegimeKind> parse_regime(const std::string& name);

}  // namespace vcoop
