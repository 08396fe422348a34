#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "vcoop/sim.hpp"
#include "vcoop/trajectory.hpp"

namespace vcoop {
namespace {

constexpr double kClipSigmas = 6.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum : std::uint64_t { kHelpersTag = 11, kMobilityTag = 12, kShadowTag = 13, kFadingTag = 14 };
enum : std::uint64_t { kVoiInfra = 0, kHelperInfra = 1, kHelperVoi = 2 };

// Per-slot effective radio range for one link.
struct RangeModel {
  bool shadowed = false;
  double alpha = 2.0, sigma = 0.0, tau = 5.0;

  double max_factor() const {
    return shadowed ? std::pow(10.0, kClipSigmas * sigma / (10.0 * alpha)) : 1.0;
  }

  double range(double r, std::uint64_t key, double slot) const {
    if (!shadowed) return r;
    const double x = std::clamp(sigma * counter_normal(key, static_cast<std::uint64_t>(slot)),
                                -kClipSigmas * sigma, kClipSigmas * sigma);
    return r * std::pow(10.0, x / (10.0 * alpha));
  }
};

// Smallest t >= lo with g(t) < level, found by doubling; g non-increasing.
template <class G>
double beyond(G&& g, double level, double lo, double guess) {
  double hi = std::max(guess, lo + 1.0);
  while (g(hi) >= level) hi = lo + 2.0 * (hi - lo);
  return hi;
}

// Times at which |g(t)| <= range, g non-increasing and linear between grid
// points of step tau.
template <class G>
std::vector<Interval> link_intervals(G&& g, double r, const RangeModel& rm, std::uint64_t key,
                                     double tau, double guess) {
  std::vector<Interval> out;
  const double rmax = r * rm.max_factor();
  if (g(0.0) < -rmax) return out;
  const double hi = beyond(g, -rmax, 0.0, guess);
  const double t_in = g(0.0) <= rmax ? 0.0 : crossing_time(g, rmax, 0.0, hi, tau);
  const double t_out = crossing_time(g, -rmax, t_in, hi, tau);
  if (!rm.shadowed) {
    if (t_out > t_in) out.push_back({t_in, t_out});
    return out;
  }
  for (double j = std::floor(t_in / tau); j * tau < t_out; j += 1.0) {
    const double sa = std::max(t_in, j * tau);
    const double sb = std::min(t_out, (j + 1.0) * tau);
    if (!(sb > sa)) continue;
    const double R = rm.range(r, key, j);
    const double ga = g(sa), gb = g(sb);
    if (gb > R || ga < -R) continue;
    const double slope = (gb - ga) / (sb - sa);
    const double ta = ga > R ? sa + (R - ga) / slope : sa;
    const double tb = gb < -R ? sa + (-R - ga) / slope : sb;
    if (!(tb > ta)) continue;
    if (!out.empty() && out.back().b >= ta) {
      out.back().b = std::max(out.back().b, tb);
    } else {
      out.push_back({ta, tb});
    }
  }
  return out;
}

struct Helper {
  Trajectory traj;
  int infra = -1;
  double queue_key = 0.0;
  std::vector<Interval> infra_iv;
  std::vector<Interval> contact_iv;
  double rate_i = 0.0, rate_v = 0.0;
  double buffer = 0.0;
  double loaded = 0.0;
};

struct Event {
  double t;
  bool up;
  int who;
};

// Groups of helpers whose VoI contact spans overlap.
std::size_t count_contact_groups(std::vector<Interval> spans) {
  if (spans.empty()) return 0;
  std::sort(spans.begin(), spans.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  std::size_t groups = 1;
  double reach = spans.front().b;
  for (const auto& iv : spans) {
    if (iv.a > reach) ++groups;
    reach = std::max(reach, iv.b);
  }
  return groups;
}

class Engine {
 public:
  Engine(const Scenario& s, const ModelConfig& m, int horizon, std::uint64_t seed)
      : s_(s), n_infra_(horizon + 1), seed_(seed), tau_(model_tau(m)) {
    if (const auto* ln = std::get_if<LogNormal>(&m.connection)) {
      range_.shadowed = true;
      range_.alpha = ln->alpha;
      range_.sigma = ln->sigma;
      range_.tau = tau_;
    }
    if (const auto* g = std::get_if<GaussianSpeed>(&m.mobility)) {
      sigma1_ = g->sigma1;
      sigma2_ = g->sigma2;
    }
    rayleigh_ = std::get_if<RayleighPathLoss>(&m.channel);
  }

  std::vector<CycleTrace> run() {
    place_voi();
    place_helpers();
    for (int k = 1; k < n_infra_; ++k) serve_infra(k);
    deliver();
    return traces();
  }

 private:
  double infra_x(int k) const { return k * s_.d; }

  double link_rate(bool v2i, std::uint64_t a, std::uint64_t b) const {
    if (!rayleigh_) return v2i ? s_.w_I : s_.w_V;
    Stream st(hash_key(seed_ ^ kFadingTag, a, b));
    const LinkProfile p = v2i ? v2i_profile(*rayleigh_, s_.r_I) : v2v_profile(*rayleigh_, s_.r0);
    return effective_rate(*rayleigh_, p, st);
  }

  void place_voi() {
    voi_ = Trajectory(-s_.r_I, 1.0, s_.v1);
    const double t_far = ((n_infra_ - 1) * s_.d + 2.0 * s_.r_I) / s_.v1;
    if (sigma1_ > 0.0) {
      voi_.randomize(sigma1_, tau_, 0.0, 2.0 * t_far + 100.0 * tau_, hash_key(seed_ ^ kMobilityTag, 0));
    }
    voi_iv_.resize(n_infra_);
    voi_rate_.resize(n_infra_);
    link_up_.resize(n_infra_);
    for (int k = 0; k < n_infra_; ++k) {
      const double xk = infra_x(k);
      auto g = [&](double t) { return xk - voi_.position(t); };
      voi_iv_[k] = link_intervals(g, s_.r_I, range_, hash_key(seed_ ^ kShadowTag, kVoiInfra, k), tau_,
                                  (xk + s_.r_I) / s_.v1 + tau_);
      if (voi_iv_[k].empty()) throw std::runtime_error("vehicle never reached infrastructure coverage");
      link_up_[k] = voi_iv_[k].front().a;
      voi_rate_[k] = link_rate(true, kVoiInfra, static_cast<std::uint64_t>(k));
    }
    for (int k = 1; k < n_infra_; ++k) {
      if (!(link_up_[k] > link_up_[k - 1])) throw std::runtime_error("cycle boundaries out of order");
    }
    t_end_ = link_up_.back();
  }

  void place_helpers() {
    if (!(s_.rho2 > 0.0)) return;
    const double vsum = s_.v1 + s_.v2;
    const double x_lo = s_.r_I - s_.r0;
    const double p_max = (n_infra_ - 1) * s_.d - s_.r_I;
    double x_hi = p_max + s_.v2 * (p_max + s_.r_I) / s_.v1;
    if (sigma1_ > 0.0 || sigma2_ > 0.0) x_hi += 0.1 * x_hi + 2000.0;

    Stream st(hash_key(seed_ ^ kHelpersTag, 0));
    std::poisson_distribution<long long> count(s_.rho2 * (x_hi - x_lo));
    std::uniform_real_distribution<double> at(x_lo, x_hi);
    std::vector<double> x(static_cast<std::size_t>(count(st)));
    for (auto& p : x) p = at(st);
    std::sort(x.begin(), x.end());

    const double lead = s_.r0 * s_.v1 / vsum;
    for (std::size_t i = 0; i < x.size(); ++i) {
      Helper h;
      h.traj = Trajectory(x[i], -1.0, s_.v2);
      double t_entry = 0.0, gap_at_entry = 0.0;
      for (int k = n_infra_ - 1; k >= 1; --k) {
        const double entry = infra_x(k) + s_.r_I;
        const double t_e = (x[i] - entry) / s_.v2;
        if (t_e < 0.0) continue;
        const double xv = voi_.position(t_e);
        const double meet = xv + s_.v1 * (entry - xv) / vsum;
        if (meet >= (k - 1) * s_.d + s_.r_I - lead && meet < k * s_.d - s_.r_I) {
          h.infra = k;
          t_entry = t_e;
          gap_at_entry = entry - xv;
          break;
        }
      }
      if (h.infra < 0) continue;

      const double rv_max = s_.r0 * range_.max_factor();
      const double t_meet = t_entry + gap_at_entry / vsum;
      if (sigma2_ > 0.0) {
        h.traj.randomize(sigma2_, tau_, t_entry - tau_, t_meet + rv_max / vsum + 60.0 + 10.0 * tau_,
                         hash_key(seed_ ^ kMobilityTag, 1 + i));
      }
      const auto id = static_cast<std::uint64_t>(i);
      const Trajectory& ht = h.traj;
      auto rel = [&](double t) { return ht.position(t) - voi_.position(t); };
      h.contact_iv = link_intervals(rel, s_.r0, range_, hash_key(seed_ ^ kShadowTag, kHelperVoi, id),
                                    tau_, t_meet + rv_max / vsum + tau_);
      const double xk = infra_x(h.infra);
      auto pass = [&](double t) { return ht.position(t) - xk; };
      auto iv = link_intervals(pass, s_.r_I, range_, hash_key(seed_ ^ kShadowTag, kHelperInfra, id),
                               tau_, t_entry + 2.0 * s_.r_I * range_.max_factor() / s_.v2 + tau_);
      // FIFO order follows nominal coverage entry; a helper leaves the queue at
      // nominal coverage exit, or at its first VoI contact (half duplex)
      const double far = beyond(pass, -s_.r_I, 0.0, t_entry + 2.0 * s_.r_I / s_.v2 + tau_);
      h.queue_key = pass(0.0) <= s_.r_I ? 0.0 : crossing_time(pass, s_.r_I, 0.0, far, tau_);
      double cut = crossing_time(pass, -s_.r_I, h.queue_key, far, tau_);
      if (!h.contact_iv.empty()) cut = std::min(cut, h.contact_iv.front().a);
      for (const auto& w : iv) {
        if (w.a >= cut) break;
        h.infra_iv.push_back({w.a, std::min(w.b, cut)});
      }
      h.rate_i = link_rate(true, kHelperInfra, id);
      h.rate_v = link_rate(false, kHelperVoi, id);
      helpers_.push_back(std::move(h));
    }
  }

  void serve_infra(int k) {
    std::vector<Event> ev;
    std::vector<double> key(helpers_.size(), kInf);
    for (std::size_t i = 0; i < helpers_.size(); ++i) {
      const Helper& h = helpers_[i];
      if (h.infra != k || h.infra_iv.empty()) continue;
      key[i] = h.queue_key;
      for (const auto& w : h.infra_iv) {
        ev.push_back({w.a, true, static_cast<int>(i)});
        ev.push_back({w.b, false, static_cast<int>(i)});
      }
    }
    if (ev.empty()) return;
    for (const auto& w : voi_iv_[k]) {
      ev.push_back({w.a, true, -1});
      ev.push_back({w.b, false, -1});
    }
    std::sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) { return x.t < y.t; });

    std::set<std::pair<double, int>> queue;
    int blocked = 0;
    double prev = ev.front().t;
    for (std::size_t e = 0; e < ev.size();) {
      const double t = ev[e].t;
      double from = prev;
      while (blocked == 0 && !queue.empty() && t > from) {
        Helper& h = helpers_[queue.begin()->second];
        const double room = quota(h) - h.buffer;
        if (!(h.rate_i > 0.0) || !(room > 0.0)) {
          queue.erase(queue.begin());
          continue;
        }
        const double full_at = from + room / h.rate_i;
        if (full_at <= t) {
          h.buffer += room;
          queue.erase(queue.begin());
          from = full_at;
        } else {
          h.buffer += h.rate_i * (t - from);
          from = t;
        }
      }
      for (; e < ev.size() && ev[e].t == t; ++e) {
        const int who = ev[e].who;
        if (who < 0) {
          blocked += ev[e].up ? 1 : -1;
        } else if (ev[e].up) {
          if (helpers_[who].buffer < quota(helpers_[who])) queue.insert({key[who], who});
        } else {
          queue.erase({key[who], who});
        }
      }
      prev = t;
    }
  }

  // Most a helper can hand over during one nominal VoI contact.
  double quota(const Helper& h) const { return 2.0 * s_.r0 * h.rate_v / (s_.v1 + s_.v2); }

  void credit(double t0, double t1, double rate, int helper) {
    t1 = std::min(t1, t_end_);
    if (!(t1 > t0)) return;
    auto c = static_cast<long>(std::upper_bound(link_up_.begin(), link_up_.end(), t0) - link_up_.begin()) - 1;
    while (t0 < t1 && c < n_infra_ - 1) {
      const double edge = std::min(t1, link_up_[c + 1]);
      if (c >= 0) {
        const double bits = rate * (edge - t0);
        if (helper < 0) {
          v2i_[c] += bits;
        } else {
          v2v_[c] += bits;
          auto& who = delivered_by_[c];
          if (std::find(who.begin(), who.end(), helper) == who.end()) who.push_back(helper);
        }
      }
      t0 = edge;
      ++c;
    }
  }

  void deliver() {
    const std::size_t cycles = static_cast<std::size_t>(n_infra_ - 1);
    v2i_.assign(cycles, 0.0);
    v2v_.assign(cycles, 0.0);
    delivered_by_.assign(cycles, {});

    // infra events carry who = -(k + 1); helper contact events carry the index
    std::vector<Event> ev;
    for (int k = 0; k < n_infra_; ++k) {
      for (const auto& w : voi_iv_[k]) {
        ev.push_back({w.a, true, -(k + 1)});
        ev.push_back({w.b, false, -(k + 1)});
      }
    }
    std::vector<double> key(helpers_.size(), kInf);
    std::vector<Interval> last(helpers_.size());
    for (std::size_t i = 0; i < helpers_.size(); ++i) {
      Helper& h = helpers_[i];
      h.loaded = h.buffer;
      if (h.contact_iv.empty() || !(h.buffer > 0.0)) continue;
      key[i] = h.contact_iv.front().a;
      last[i] = h.contact_iv.back();
      for (const auto& w : h.contact_iv) {
        ev.push_back({w.a, true, static_cast<int>(i)});
        ev.push_back({w.b, false, static_cast<int>(i)});
      }
    }
    std::sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) { return x.t < y.t; });

    std::map<int, int> linked;  // infra index -> open interval count
    std::set<std::pair<double, int>> queue;
    double prev = ev.empty() ? 0.0 : ev.front().t;
    for (std::size_t e = 0; e < ev.size();) {
      const double t = ev[e].t;
      if (t > prev) transmit(prev, t, linked, queue);
      for (; e < ev.size() && ev[e].t == t; ++e) {
        const int who = ev[e].who;
        if (who < 0) {
          const int k = -who - 1;
          if (ev[e].up) {
            ++linked[k];
          } else if (--linked[k] == 0) {
            linked.erase(k);
          }
        } else if (ev[e].up) {
          if (helpers_[who].buffer > 0.0) queue.insert({key[who], who});
        } else {
          queue.erase({key[who], who});
          if (t >= last[who].b) helpers_[who].buffer = 0.0;
        }
      }
      prev = t;
      if (prev >= t_end_) break;
    }
    audit();
  }

  void transmit(double t0, double t1, const std::map<int, int>& linked,
                std::set<std::pair<double, int>>& queue) {
    if (!linked.empty()) {
      const int k = linked.begin()->first;
      credit(t0, t1, voi_rate_[k], -1);
      return;
    }
    while (t0 < t1 && !queue.empty()) {
      const int who = queue.begin()->second;
      Helper& h = helpers_[who];
      if (!(h.rate_v > 0.0)) {
        queue.erase(queue.begin());
        continue;
      }
      const double empty_at = t0 + h.buffer / h.rate_v;
      if (empty_at <= t1) {
        credit(t0, empty_at, h.rate_v, who);
        h.buffer = 0.0;
        queue.erase(queue.begin());
        t0 = empty_at;
      } else {
        credit(t0, t1, h.rate_v, who);
        h.buffer -= h.rate_v * (t1 - t0);
        t0 = t1;
      }
    }
  }

  // Per-cycle conservation: helpers cannot deliver more than infrastructure
  // loaded into them.
  void audit() const {
    for (std::size_t c = 0; c < v2v_.size(); ++c) {
      double loaded = 0.0;
      for (int who : delivered_by_[c]) loaded += helpers_[who].loaded;
      if (v2v_[c] > loaded * (1.0 + 1e-9) + 1e-6) {
        throw std::logic_error("helpers delivered more than they were loaded with");
      }
    }
  }

  std::vector<CycleTrace> traces() const {
    std::vector<CycleTrace> out;
    for (int c = 1; c + 1 < n_infra_ - 1; ++c) {
      CycleTrace t;
      t.duration = link_up_[c + 1] - link_up_[c];
      t.v2i_bits = v2i_[c];
      t.v2v_bits = v2v_[c];
      std::vector<Interval> spans;
      for (const auto& h : helpers_) {
        if (h.infra != c + 1) continue;
        ++t.helper_count;
        if (!h.contact_iv.empty()) spans.push_back({h.contact_iv.front().a, h.contact_iv.back().b});
      }
      t.cluster_count = count_contact_groups(std::move(spans));
      out.push_back(t);
    }
    return out;
  }

  const Scenario& s_;
  int n_infra_;
  std::uint64_t seed_;
  double tau_;
  RangeModel range_;
  double sigma1_ = 0.0, sigma2_ = 0.0;
  const RayleighPathLoss* rayleigh_ = nullptr;

  Trajectory voi_;
  std::vector<std::vector<Interval>> voi_iv_;
  std::vector<double> voi_rate_;
  std::vector<double> link_up_;
  double t_end_ = 0.0;
  std::vector<Helper> helpers_;
  std::vector<double> v2i_, v2v_;
  std::vector<std::vector<int>> delivered_by_;
};

}  // namespace

std::vector<CycleTrace> run_event_driven(const Scenario& s, const ModelConfig& m, int horizon_cycles,
                                         std::uint64_t seed) {
  require_valid(s);
  require_valid(m);
  if (horizon_cycles < 3) {
    throw PreconditionError("horizon shorter than 3 cycles leaves nothing after warm-up trimming");
  }
  return Engine(s, m, horizon_cycles, seed).run();
}

}  // namespace vcoop
