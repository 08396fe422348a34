#include "vcoop/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vcoop/simplex.hpp"

namespace vcoop {
namespace {

double gap(const HelperConfig& cfg, std::size_t i) { return cfg.gaps.at(i); }

void check_config(const HelperConfig& cfg) {
  if (cfg.count == 0) return;
  if (cfg.gaps.size() + 1 != cfg.count) {
    throw std::invalid_argument("helper config needs count - 1 gaps");
  }
  for (double g : cfg.gaps) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("gaps must be finite and >= 0");
  }
}

void require_regime(const Scenario& s, bool ok, const char* who, const char* need) {
  if (!ok) {
    throw PreconditionError(std::string(who) + " requires " + need + ", scenario is " +
                            to_string(classify_regime(s).kind));
  }
}

std::vector<double> positions(const HelperConfig& cfg) {
  std::vector<double> x(cfg.count, 0.0);
  for (std::size_t i = 1; i < cfg.count; ++i) x[i] = x[i - 1] + gap(cfg, i - 1);
  return x;
}

double total_of(const std::vector<double>& y) {
  double t = 0.0;
  for (double v : y) t += v;
  return t;
}

// Dinic on double capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : adj_(n), level_(n), it_(n) {}

  int add_edge(int u, int v, double cap) {
    adj_[u].push_back({v, static_cast<int>(adj_[v].size()), cap, cap});
    adj_[v].push_back({u, static_cast<int>(adj_[u].size()) - 1, 0.0, 0.0});
    return static_cast<int>(adj_[u].size()) - 1;
  }

  double run(int s, int t, double eps) {
    eps_ = eps;
    double flow = 0.0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      for (;;) {
        const double f = dfs(s, t, std::numeric_limits<double>::infinity());
        if (f <= eps_) break;
        flow += f;
      }
    }
    return flow;
  }

  double flow_on(int u, int idx) const { return adj_[u][idx].orig - adj_[u][idx].cap; }

 private:
  struct Edge {
    int to, rev;
    double cap, orig;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<int> q{s};
    level_[s] = 0;
    for (std::size_t h = 0; h < q.size(); ++h) {
      const int u = q[h];
      for (const Edge& e : adj_[u]) {
        if (e.cap > eps_ && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push_back(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(int u, int t, double pushed) {
    if (u == t) return pushed;
    for (int& i = it_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      Edge& e = adj_[u][i];
      if (e.cap <= eps_ || level_[e.to] != level_[u] + 1) continue;
      const double got = dfs(e.to, t, std::min(pushed, e.cap));
      if (got > eps_) {
        e.cap -= got;
        adj_[e.to][e.rev].cap += got;
        return got;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_, it_;
  double eps_ = 0.0;
};

struct Segments {
  std::vector<double> cuts;  // breakpoints; segment k is [cuts[k], cuts[k+1]]
  std::vector<std::pair<int, int>> span;  // per helper: first and one-past-last segment
};

Segments segment_windows(const std::vector<double>& x, double width) {
  Segments seg;
  for (double p : x) {
    seg.cuts.push_back(p);
    seg.cuts.push_back(p + width);
  }
  std::sort(seg.cuts.begin(), seg.cuts.end());
  seg.cuts.erase(std::unique(seg.cuts.begin(), seg.cuts.end()), seg.cuts.end());
  for (double p : x) {
    const int a = static_cast<int>(std::lower_bound(seg.cuts.begin(), seg.cuts.end(), p) -
                                   seg.cuts.begin());
    const int b = static_cast<int>(
        std::lower_bound(seg.cuts.begin(), seg.cuts.end(), p + width) - seg.cuts.begin());
    seg.span.emplace_back(a, b);
  }
  return seg;
}

}  // namespace

double window_union_bits(const HelperConfig& cfg, double radius, double rate_per_metre) {
  if (cfg.count == 0) return 0.0;
  double len = 2.0 * radius;
  for (double g : cfg.gaps) len += std::min(g, 2.0 * radius);
  return len * rate_per_metre;
}

CycleLp build_cycle_lp(const HelperConfig& cfg, const Scenario& s) {
  check_config(cfg);
  CycleLp lp;
  lp.n = cfg.count;
  const int n = static_cast<int>(cfg.count);
  if (n == 0) return lp;

  const double rate_d = s.w_I / s.v2;
  const double rate_y = s.w_V / (s.v1 + s.v2);
  const double cap_d = 2.0 * s.r_I * rate_d;
  const double cap_y = 2.0 * s.r0 * rate_y;

  for (int i = 0; i < n; ++i) lp.rows.push_back({RowFamily::DBox, {{i, 1.0}}, cap_d});
  for (int i = 0; i < n; ++i) lp.rows.push_back({RowFamily::YBox, {{n + i, 1.0}}, cap_y});
  for (int i = 0; i < n; ++i) {
    lp.rows.push_back({RowFamily::Coupling, {{n + i, 1.0}, {i, -1.0}}, 0.0});
  }

  const auto interval_rows = [&](RowFamily fam, int offset, double radius, double rate) {
    for (int k1 = 0; k1 < n; ++k1) {
      double len = 0.0;
      LpRow row{fam, {}, 0.0};
      for (int k2 = k1; k2 < n; ++k2) {
        if (k2 > k1) len += std::min(gap(cfg, k2 - 1), 2.0 * radius);
        row.terms.emplace_back(offset + k2, 1.0);
        row.rhs = (len + 2.0 * radius) * rate;
        lp.rows.push_back(row);
      }
    }
  };
  interval_rows(RowFamily::DInterval, 0, s.r_I, rate_d);
  interval_rows(RowFamily::YInterval, n, s.r0, rate_y);
  return lp;
}

Schedule solve_cycle_lp(const CycleLp& lp) {
  Schedule out;
  const std::size_t n = lp.n;
  out.d_alloc.assign(n, 0.0);
  out.y_alloc.assign(n, 0.0);
  if (n == 0) return out;

  double scale = 0.0;
  for (const auto& r : lp.rows) scale = std::max(scale, r.rhs);
  if (!(scale > 0.0)) return out;

  const std::size_t nv = lp.num_vars();
  std::vector<std::vector<double>> A(lp.rows.size(), std::vector<double>(nv, 0.0));
  std::vector<double> b(lp.rows.size());
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    for (const auto& [j, a] : lp.rows[i].terms) A[i][j] = a;
    b[i] = lp.rows[i].rhs / scale;
  }
  std::vector<double> c(nv, 0.0);
  for (std::size_t j = n; j < nv; ++j) c[j] = 1.0;

  const LpSolution sol = solve_dense_lp(A, b, c);
  if (sol.status != LpStatus::Optimal) {
    throw std::logic_error("cycle LP reported unbounded; the instance is malformed");
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.d_alloc[i] = sol.x[i] * scale;
    out.y_alloc[i] = sol.x[n + i] * scale;
  }
  out.total_delivered = sol.value * scale;
  return out;
}

Schedule schedule_theorem1(const HelperConfig& cfg, const Scenario& s) {
  check_config(cfg);
  require_regime(s, s.w_I <= classify_regime(s).w_lo, "schedule_theorem1",
                 "InfrastructureLimited regime (w_I <= w_lo)");
  Schedule out;
  const double rate = s.w_I / s.v2;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const double len = i + 1 < cfg.count ? std::min(gap(cfg, i), 2.0 * s.r_I) : 2.0 * s.r_I;
    out.d_alloc.push_back(len * rate);
  }
  out.y_alloc = out.d_alloc;
  out.total_delivered = total_of(out.y_alloc);
  return out;
}

Schedule schedule_theorem2(const HelperConfig& cfg, const Scenario& s) {
  check_config(cfg);
  require_regime(s, s.w_I >= classify_regime(s).w_hi, "schedule_theorem2",
                 "V2VLimited regime (w_I >= w_hi)");
  Schedule out;
  const double rate_d = s.w_I / s.v2;
  const double rate_y = s.w_V / (s.v1 + s.v2);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const bool last = i + 1 == cfg.count;
    out.d_alloc.push_back((last ? 2.0 * s.r_I : std::min(gap(cfg, i), 2.0 * s.r_I)) * rate_d);
    out.y_alloc.push_back((last ? 2.0 * s.r0 : std::min(gap(cfg, i), 2.0 * s.r0)) * rate_y);
  }
  out.total_delivered = total_of(out.y_alloc);
  return out;
}

TransitionalBounds transitional_cycle_bounds(const HelperConfig& cfg, const Scenario& s) {
  check_config(cfg);
  const Regime reg = classify_regime(s);
  require_regime(s, s.w_I > reg.w_lo && s.w_I < reg.w_hi, "transitional_cycle_bounds",
                 "Transitional regime (w_lo < w_I < w_hi)");
  TransitionalBounds out;
  const double rate_d = s.w_I / s.v2;
  const double rate_y = s.w_V / (s.v1 + s.v2);
  const double cap_y = 2.0 * s.r0 * rate_y;
  Schedule& sch = out.schedule_for_lower;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    if (i + 1 == cfg.count) {
      sch.d_alloc.push_back(2.0 * s.r_I * rate_d);
      sch.y_alloc.push_back(cap_y);
    } else {
      sch.d_alloc.push_back(std::min(gap(cfg, i), 2.0 * s.r_I) * rate_d);
      sch.y_alloc.push_back(std::min(gap(cfg, i) * rate_d, cap_y));
    }
  }
  sch.total_delivered = total_of(sch.y_alloc);
  out.lower = sch.total_delivered;
  out.upper = std::min(window_union_bits(cfg, s.r_I, rate_d), window_union_bits(cfg, s.r0, rate_y));
  if (cfg.count == 0) out.upper = 0.0;
  return out;
}

Schedule solve_cycle_flow(const HelperConfig& cfg, const Scenario& s) {
  check_config(cfg);
  Schedule out;
  const int n = static_cast<int>(cfg.count);
  out.d_alloc.assign(n, 0.0);
  out.y_alloc.assign(n, 0.0);
  if (n == 0) return out;

  const std::vector<double> x = positions(cfg);
  const Segments dseg = segment_windows(x, 2.0 * s.r_I);
  const Segments yseg = segment_windows(x, 2.0 * s.r0);
  const int nd = static_cast<int>(dseg.cuts.size()) - 1;
  const int ny = static_cast<int>(yseg.cuts.size()) - 1;

  // node layout: source, D segments, helpers, Y segments, sink
  const int src = 0;
  const int d0 = 1;
  const int h0 = d0 + nd;
  const int y0 = h0 + n;
  const int sink = y0 + ny;
  MaxFlow g(sink + 1);

  const double rate_d = s.w_I / s.v2;
  const double rate_y = s.w_V / (s.v1 + s.v2);
  const double big = (window_union_bits(cfg, s.r_I, rate_d) + 1.0) * 4.0;
  for (int k = 0; k < nd; ++k) g.add_edge(src, d0 + k, (dseg.cuts[k + 1] - dseg.cuts[k]) * rate_d);
  for (int k = 0; k < ny; ++k) g.add_edge(y0 + k, sink, (yseg.cuts[k + 1] - yseg.cuts[k]) * rate_y);
  std::vector<std::vector<int>> out_edges(n);
  for (int i = 0; i < n; ++i) {
    for (int k = dseg.span[i].first; k < dseg.span[i].second; ++k) g.add_edge(d0 + k, h0 + i, big);
    for (int k = yseg.span[i].first; k < yseg.span[i].second; ++k) {
      out_edges[i].push_back(g.add_edge(h0 + i, y0 + k, big));
    }
  }
  const double scale = std::max(2.0 * s.r_I * rate_d, 2.0 * s.r0 * rate_y);
  out.total_delivered = g.run(src, sink, scale * 1e-14);
  for (int i = 0; i < n; ++i) {
    double through = 0.0;
    for (int idx : out_edges[i]) through += g.flow_on(h0 + i, idx);
    out.d_alloc[i] = through;
    out.y_alloc[i] = through;
  }
  return out;
}

CycleOptimum cycle_optimum(const HelperConfig& cfg, const Scenario& s, std::size_t lp_cap) {
  check_config(cfg);
  CycleOptimum out;
  Schedule& sch = out.schedule;
  std::size_t start = 0;
  while (start < cfg.count) {
    std::size_t end = start + 1;
    while (end < cfg.count && gap(cfg, end - 1) < 2.0 * s.r_I) ++end;
    HelperConfig block;
    block.count = end - start;
    block.gaps.assign(cfg.gaps.begin() + start, cfg.gaps.begin() + (end - 1));
    Schedule part;
    if (block.count <= lp_cap) {
      part = solve_cycle_lp(build_cycle_lp(block, s));
    } else {
      part = solve_cycle_flow(block, s);
      ++out.flow_blocks;
    }
    ++out.blocks;
    sch.d_alloc.insert(sch.d_alloc.end(), part.d_alloc.begin(), part.d_alloc.end());
    sch.y_alloc.insert(sch.y_alloc.end(), part.y_alloc.begin(), part.y_alloc.end());
    sch.total_delivered += part.total_delivered;
    start = end;
  }
  return out;
}

std::vector<std::string> check_schedule(const HelperConfig& cfg, const Scenario& s,
                                        const Schedule& sched, double rel_tol) {
  std::vector<std::string> bad;
  const std::size_t n = cfg.count;
  if (sched.d_alloc.size() != n || sched.y_alloc.size() != n) {
    bad.emplace_back("schedule length does not match helper count");
    return bad;
  }
  const double rate_d = s.w_I / s.v2;
  const double rate_y = s.w_V / (s.v1 + s.v2);
  const double cap_d = 2.0 * s.r_I * rate_d;
  const double cap_y = 2.0 * s.r0 * rate_y;
  const double slack = rel_tol * std::max({cap_d, cap_y, 1.0});
  const auto report = [&](const std::string& what, double lhs, double rhs) {
    if (lhs > rhs + slack) {
      std::ostringstream msg;
      msg << what << ": " << lhs << " > " << rhs;
      bad.push_back(msg.str());
    }
  };

  double sum_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = sched.d_alloc[i];
    const double y = sched.y_alloc[i];
    sum_y += y;
    report("D_" + std::to_string(i + 1) + " negative", -d, 0.0);
    report("Y_" + std::to_string(i + 1) + " negative", -y, 0.0);
    report("D_" + std::to_string(i + 1) + " cap", d, cap_d);
    report("Y_" + std::to_string(i + 1) + " cap", y, cap_y);
    report("Y_" + std::to_string(i + 1) + " exceeds D", y, d);
  }
  if (std::abs(sum_y - sched.total_delivered) > slack * std::max<double>(1.0, n)) {
    bad.emplace_back("total_delivered does not equal the sum of Y");
  }

  // Union length of the windows [x_k, x_k + w], k = k1..k2, by sweeping.
  const std::vector<double> x = positions(cfg);
  const auto sweep = [&](const std::vector<double>& alloc, double width, double rate,
                         const char* name) {
    for (std::size_t k1 = 0; k1 < n; ++k1) {
      double covered = 0.0;
      double reach = -std::numeric_limits<double>::infinity();
      double lhs = 0.0;
      for (std::size_t k2 = k1; k2 < n; ++k2) {
        const double a = x[k2];
        const double b = x[k2] + width;
        covered += b - std::max(a, reach);
        reach = b;
        lhs += alloc[k2];
        report(std::string(name) + " interval [" + std::to_string(k1 + 1) + "," +
                   std::to_string(k2 + 1) + "]",
               lhs, covered * rate);
      }
    }
  };
  sweep(sched.d_alloc, 2.0 * s.r_I, rate_d, "D");
  sweep(sched.y_alloc, 2.0 * s.r0, rate_y, "Y");
  return bad;
}

}  // namespace vcoop
