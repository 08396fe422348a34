#include "vcoop/trajectory.hpp"

#include <algorithm>

#include "vcoop/rng.hpp"

namespace vcoop {

Trajectory::Trajectory(double x0, double dir, double mean_speed)
    : x0_(x0), dir_(dir), v_(mean_speed) {}

void Trajectory::randomize(double sigma, double tau, double t_from, double t_to,
                           std::uint64_t key, double min_speed) {
  grid_.clear();
  if (!(sigma > 0.0) || !(t_to > t_from)) return;
  tau_ = tau;
  const double j0 = std::floor(std::max(0.0, t_from) / tau);
  const double j1 = std::ceil(t_to / tau);
  t_start_ = j0 * tau;
  grid_.reserve(static_cast<std::size_t>(j1 - j0) + 1);
  double x = x0_ + dir_ * v_ * t_start_;
  grid_.push_back(x);
  for (double j = j0; j < j1; j += 1.0) {
    const double speed =
        std::max(min_speed, v_ + sigma * counter_normal(key, static_cast<std::uint64_t>(j)));
    x += dir_ * speed * tau;
    grid_.push_back(x);
  }
}

double Trajectory::position(double t) const {
  if (grid_.empty() || t <= t_start_) return x0_ + dir_ * v_ * t;
  const double u = (t - t_start_) / tau_;
  const auto last = static_cast<double>(grid_.size() - 1);
  if (u >= last) return grid_.back() + dir_ * v_ * (t - (t_start_ + last * tau_));
  const auto i = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(i);
  return grid_[i] + (grid_[i + 1] - grid_[i]) * frac;
}

}  // namespace vcoop
