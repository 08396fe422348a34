#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vcoop/model.hpp"

namespace vcoop {

enum class RowFamily { DBox, YBox, Coupling, DInterval, YInterval };

struct LpRow {
  RowFamily family;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  double rhs = 0.0;                           // bits
};

// Variables 0..n-1 are D_1..D_n, n..2n-1 are Y_1..Y_n. Objective: max sum Y.
struct CycleLp {
  std::size_t n = 0;
  std::vector<LpRow> rows;

  std::size_t num_vars() const { return 2 * n; }
};

struct Schedule {
  std::vector<double> d_alloc;
  std::vector<double> y_alloc;
  double total_delivered = 0.0;
};

struct TransitionalBounds {
  double lower = 0.0;
  double upper = 0.0;
  Schedule schedule_for_lower;
};

CycleLp build_cycle_lp(const HelperConfig& cfg, const Scenario& s);

/// Exact optimum by dense simplex. Throws std::logic_error if the solver
/// reports anything but an optimal vertex.
Schedule solve_cycle_lp(const CycleLp& lp);

Schedule schedule_theorem1(const HelperConfig& cfg, const Scenario& s);
Schedule schedule_theorem2(const HelperConfig& cfg, const Scenario& s);
TransitionalBounds transitional_cycle_bounds(const HelperConfig& cfg, const Scenario& s);

/// Same optimum as solve_cycle_lp, computed as a max-flow from the
/// infrastructure coverage windows through helpers to the VoI contact windows.
Schedule solve_cycle_flow(const HelperConfig& cfg, const Scenario& s);

struct CycleOptimum {
  Schedule schedule;
  std::size_t blocks = 0;
  std::size_t flow_blocks = 0;  // blocks larger than lp_cap, solved by max-flow
};

/// Splits the cycle at gaps >= 2 r_I (no row couples helpers across such a
/// gap) and solves each block: simplex up to lp_cap helpers, max-flow above.
CycleOptimum cycle_optimum(const HelperConfig& cfg, const Scenario& s, std::size_t lp_cap = 64);

/// Re-evaluates every constraint directly from helper positions. Returns a
/// description of each row violated by more than rel_tol relative.
std::vector<std::string> check_schedule(const HelperConfig& cfg, const Scenario& s,
                                        const Schedule& sched, double rel_tol = 1e-9);

/// (sum min(l_i, 2r) + 2r) * rate, the full-interval bound for window radius r.
double window_union_bits(const HelperConfig& cfg, double radius, double rate_per_metre);

}  // namespace vcoop
