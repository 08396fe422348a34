#include "vcoop/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vcoop {
namespace {

class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
          const std::vector<double>& c, double eps)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        eps_(eps),
        basic_(m_),
        nonbasic_(n_ + 1),
        t_(static_cast<std::size_t>(m_ + 1) * (n_ + 1)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) at(i, j) = A[i][j];
      at(i, n_) = b[i];
      basic_[i] = n_ + i;
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      at(m_, j) = -c[j];
    }
    nonbasic_[n_] = -1;
  }

  LpSolution run() {
    LpSolution sol;
    bool bland = false;
    for (;;) {
      int s = -1;
      for (int j = 0; j < n_; ++j) {
        if (at(m_, j) >= -eps_) continue;
        if (s < 0) {
          s = j;
        } else if (bland ? nonbasic_[j] < nonbasic_[s] : at(m_, j) < at(m_, s)) {
          s = j;
        }
      }
      if (s < 0) break;

      int r = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (at(i, s) <= eps_) continue;
        const double ratio = at(i, n_) / at(i, s);
        if (r < 0 || ratio < best - eps_ ||
            (ratio <= best + eps_ && basic_[i] < basic_[r])) {
          r = i;
          best = std::min(best, ratio);
        }
      }
      if (r < 0) {
        sol.status = LpStatus::Unbounded;
        return sol;
      }
      bland = at(r, n_) <= eps_;
      pivot(r, s);
      ++sol.pivots;
    }
    sol.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] < n_) sol.x[basic_[i]] = at(i, n_);
    }
    sol.value = at(m_, n_);
    return sol;
  }

 private:
  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }

  void pivot(int r, int s) {
    const double inv = 1.0 / at(r, s);
    double* row_r = &at(r, 0);
    for (int j = 0; j <= n_; ++j) row_r[j] *= inv;
    row_r[s] = inv;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row_i = &at(i, 0);
      const double f = row_i[s];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) row_i[j] -= f * row_r[j];
      row_i[s] = -f * inv;
    }
    std::swap(basic_[r], nonbasic_[s]);
  }

  int m_, n_;
  double eps_;
  std::vector<int> basic_, nonbasic_;
  std::vector<double> t_;
};

}  // namespace

LpSolution solve_dense_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                          const std::vector<double>& c, double eps) {
  if (A.size() != b.size()) throw std::invalid_argument("row count mismatch");
  for (const auto& row : A) {
    if (row.size() != c.size()) throw std::invalid_argument("column count mismatch");
  }
  for (double v : b) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("right-hand sides must be finite and non-negative");
    }
  }
  if (c.empty()) return LpSolution{};
  return Tableau(A, b, c, eps).run();
}

}  // namespace vcoop
