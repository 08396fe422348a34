#pragma once

#include <vector>

namespace vcoop {

enum class LpStatus { Optimal, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  std::vector<double> x;
  int pivots = 0;
};

// maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0 so the origin is
// a feasible basis and no phase one is needed. Dense tableau; Dantzig pricing
// with Bland's rule taking over on degenerate pivots.
LpSolution solve_dense_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                          const std::vector<double>& c, double eps = 1e-12);

}  // namespace vcoop
