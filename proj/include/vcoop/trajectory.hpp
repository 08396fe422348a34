#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace vcoop {

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

// Monotone piecewise-linear motion on a global grid of step tau. Outside the
// explicit window [t_start, t_start + tau * (grid.size() - 1)] the vehicle
// moves at its mean speed.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(double x0, double dir, double mean_speed);

  /// Per-slot speeds N(mean, sigma^2) floored at min_speed, drawn from
  /// counter-based normals keyed by `key` and the global slot index, over
  /// the slots covering [t_from, t_to].
  void randomize(double sigma, double tau, double t_from, double t_to, std::uint64_t key,
                 double min_speed = 0.5);

  double position(double t) const;
  double dir() const { return dir_; }
  double mean_speed() const { return v_; }

 private:
  double x0_ = 0.0, dir_ = 1.0, v_ = 0.0;
  double tau_ = 0.0, t_start_ = 0.0;
  std::vector<double> grid_;
};

/// Finds t in [lo, hi] with f(t) = target for f non-increasing and linear
/// between multiples of tau. Requires f(lo) >= target >= f(hi).
template <class F>
double crossing_time(F&& f, double target, double lo, double hi, double tau) {
  // candidate breakpoints: lo, grid points strictly inside, hi
  const double first = std::floor(lo / tau) + 1.0;
  const double last = std::ceil(hi / tau) - 1.0;
  const long inner = last >= first ? static_cast<long>(last - first) + 1 : 0;
  const auto point = [&](long i) {
    if (i <= 0) return lo;
    if (i > inner) return hi;
    return (first + static_cast<double>(i - 1)) * tau;
  };
  long a = 0, b = inner + 1;  // f(point(a)) >= target, f(point(b)) <= target
  while (b - a > 1) {
    const long mid = a + (b - a) / 2;
    if (f(point(mid)) >= target) {
      a = mid;
    } else {
      b = mid;
    }
  }
  const double ta = point(a), tb = point(b);
  const double fa = f(ta), fb = f(tb);
  if (fa == fb) return ta;
  const double t = ta + (fa - target) / (fa - fb) * (tb - ta);
  return std::fmin(std::fmax(t, ta), tb);
}

}  // namespace vcoop
