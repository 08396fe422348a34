#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "vcoop/analytic.hpp"
#include "vcoop/channel.hpp"
#include "vcoop/rng.hpp"
#include "vcoop/sim.hpp"
#include "vcoop/trajectory.hpp"

using namespace vcoop;

namespace {

Scenario at(double w_I, double rho2 = 0.005, double d = 10e3) {
  Scenario s = reference_scenario();
  s.w_I = w_I;
  s.rho2 = rho2;
  s.d = d;
  return s;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_traces(const std::vector<CycleTrace>& a, const std::vector<CycleTrace>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i].v2i_bits, b[i].v2i_bits) || !same_bits(a[i].v2v_bits, b[i].v2v_bits) ||
        !same_bits(a[i].duration, b[i].duration) || a[i].helper_count != b[i].helper_count ||
        a[i].cluster_count != b[i].cluster_count) {
      return false;
    }
  }
  return true;
}

// Two-sided KS statistic of sorted samples against a CDF.
template <class Cdf>
double ks_stat(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

CycleTrace fixed(double bits, double secs) {
  CycleTrace t;
  t.v2i_bits = bits / 2;
  t.v2v_bits = bits / 2;
  t.duration = secs;
  return t;
}

}  // namespace

TEST_CASE("splitmix64 reference value and seed derivation") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  std::set<std::uint64_t> seen;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    for (Component c : {Component::SampledCycle, Component::EventHelpers, Component::Mobility,
                        Component::Shadowing, Component::Fading, Component::LpCheck}) {
      seen.insert(derive_seed(7, rep, c));
    }
  }
  CHECK(seen.size() == 600);
  CHECK(derive_seed(7, 3, Component::Mobility) == derive_seed(7, 3, Component::Mobility));
  CHECK(derive_seed(7, 3, Component::Mobility) != derive_seed(8, 3, Component::Mobility));
}

TEST_CASE("counter draws: range and moments") {
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = counter_uniform(42, i);
    CHECK_UNARY(u > 0.0 && u < 1.0);
    const double z = counter_normal(42, i);
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.01);
  CHECK(counter_normal(5, 9) == counter_normal(5, 9));
}

TEST_CASE("generate_helpers: zero density") {
  Stream st(1);
  for (int i = 0; i < 100; ++i) CHECK(generate_helpers(0.0, 24250, st).count == 0);
}

TEST_CASE("generate_helpers: Poisson mean") {
  Stream st(derive_seed(3, 0, Component::SampledCycle));
  double total = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) total += static_cast<double>(generate_helpers(0.005, 24250, st).count);
  CHECK(gen::rel(total / draws, 121.25) < 0.01);
}

TEST_CASE("generate_helpers: gaps KS-consistent with Exp(rho2)") {
  Stream st(derive_seed(4, 0, Component::SampledCycle));
  const HelperConfig cfg = generate_helpers(0.005, 2e7, st);
  REQUIRE(cfg.gaps.size() > 90000);
  const double d = ks_stat(cfg.gaps, [](double x) { return 1.0 - std::exp(-0.005 * x); });
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(cfg.gaps.size())));  // 1% critical value
  double prev = -1;
  double pos = cfg.first_offset;
  CHECK(pos >= 0.0);
  for (double g : cfg.gaps) {
    CHECK_UNARY(g >= 0.0);
    pos += g;
    prev = pos;
  }
  CHECK(prev <= 2e7);
}

TEST_CASE("segment and effective rates") {
  const RayleighPathLoss ch;
  const LinkProfile vi = v2i_profile(ch, 500);
  const double p_mw = std::pow(10.0, 5.2);
  CHECK(segment_rate(vi, 10, 0.5) == doctest::Approx(40e6 * std::log2(1 + p_mw * 0.25 / 1e4)).epsilon(1e-14));
  CHECK(segment_rate(vi, 0.1, 1.0) == segment_rate(vi, 1.0, 1.0));
  CHECK(effective_rate_fixed(vi, 1, 0.7) == doctest::Approx(segment_rate(vi, 1.0, 0.7)).epsilon(1e-15));

  Stream st(9);
  const int n = 10000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double r = effective_rate(ch, vi, st);
    sum += r;
    sq += r * r;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(sd / std::sqrt(static_cast<double>(n)) / mean < 0.01);
  CHECK(mean > 0.0);
}

TEST_CASE("model validation") {
  ModelConfig m;
  CHECK(model_violations(m).empty());
  m.mobility = GaussianSpeed{-1, 2, 5};
  CHECK(!model_violations(m).empty());
  m = ModelConfig{};
  m.channel = RayleighPathLoss{40e6, 52, 5e6, 20, 0};
  CHECK(!model_violations(m).empty());
  m = ModelConfig{};
  m.connection = LogNormal{2, 4, 0};
  CHECK_THROWS_AS(require_valid(m), ValidationError);
}

TEST_CASE("trajectory: constant and randomized motion") {
  Trajectory t(100, -1, 25);
  CHECK(t.position(4) == 0.0);
  Trajectory r(0, 1, 15);
  r.randomize(2, 5, 0, 1000, 77);
  double prev = r.position(0);
  for (double x = 1; x < 1100; x += 1) {
    const double p = r.position(x);
    CHECK(p - prev >= 0.5 * 1 - 1e-9);
    prev = p;
  }
  Trajectory flat(0, 1, 15);
  flat.randomize(0, 5, 0, 1000, 77);
  CHECK(flat.position(333) == 15 * 333.0);
}

TEST_CASE("crossing_time solves piecewise-linear decreasing functions") {
  const auto f = [](double t) { return 1000 - 25 * t; };
  CHECK(crossing_time(f, 500, 0, 100, 5) == doctest::Approx(20).epsilon(1e-14));
  Trajectory r(1000, -1, 25);
  r.randomize(2, 5, 0, 200, 5);
  const auto pos = [&](double t) { return r.position(t); };
  const double t = crossing_time(pos, 0, 0, 200, 5);
  CHECK(std::abs(r.position(t)) < 1e-9);
}

TEST_CASE("sampled cycles") {
  Stream st(1);
  const CycleTrace none = run_cycle_sampled(at(1e6, 0.0), st);
  CHECK(none.v2v_bits == 0.0);
  CHECK(none.v2i_bits == doctest::Approx(2 * 500 * 1e6 / 15).epsilon(1e-15));
  CHECK(none.duration == doctest::Approx(10e3 / 15).epsilon(1e-15));

  Stream st2(2);
  for (int i = 0; i < 50; ++i) {
    const CycleTrace t = run_cycle_sampled(at(2e6, 0.004, 8e3), st2);
    REQUIRE(t.v2v_lower.has_value());
    CHECK(*t.v2v_lower <= t.v2v_bits * (1 + 1e-9));
    CHECK(t.v2v_bits <= *t.v2v_upper * (1 + 1e-9));
  }
}

TEST_CASE("sampled gap sum reproduces E[D_V1] within 5%, analytic on the high side") {
  SampledOptions opt;
  opt.gap_sum_only = true;
  for (double d : {10e3, 20e3}) {
    const Scenario s = at(1e6, 0.005, d);
    const EstimateRun run = simulate(s, ModelConfig{}, SimMode::SampledSchedule, 2000, 7, 1, opt);
    const double analytic = std::get<double>(throughput_eta1(s).e_v2v_data) / expected_cycle_time(s);
    CHECK(gen::rel(run.estimate.mean, analytic) < 0.05);
    CHECK(analytic >= run.estimate.ci_lo);
  }
}

TEST_CASE("summarize: ratio of means and jackknife error") {
  std::vector<CycleTrace> same(40, fixed(100, 10));
  const Summary a = summarize(same);
  CHECK(a.mean == 10.0);
  CHECK(a.std_err == 0.0);
  CHECK(a.ci_lo == a.ci_hi);

  std::vector<CycleTrace> two;
  for (int i = 0; i < 60; ++i) two.push_back(fixed(2.0 * (1 + i % 7), 1 + i % 7));
  CHECK(summarize(two).mean == doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS(summarize(std::vector<CycleTrace>(29, fixed(1, 1))), PreconditionError);

  std::vector<CycleTrace> noisy;
  for (int i = 0; i < 100; ++i) noisy.push_back(fixed(10 + (i % 5), 1));
  const Summary n = summarize(noisy);
  CHECK(n.std_err > 0);
  CHECK(n.ci_lo < n.mean);
  CHECK(n.mean < n.ci_hi);
  CHECK(n.ci_hi - n.mean == doctest::Approx(1.96 * n.std_err).epsilon(1e-12));
}

TEST_CASE("sampled estimate: CI half-width under 2% at 2000 cycles") {
  const auto e = estimate_throughput(at(1e6), ModelConfig{}, SimMode::SampledSchedule, 2000, 7);
  CHECK((e.ci_hi - e.mean) / e.mean < 0.02);
  CHECK(e.n_cycles == 2000);
}

TEST_CASE("estimates are bit-identical across worker counts") {
  for (SimMode mode : {SimMode::SampledSchedule, SimMode::EventDriven}) {
    const EstimateRun a = simulate(at(6e6), ModelConfig{}, mode, 200, 11, 1);
    const EstimateRun b = simulate(at(6e6), ModelConfig{}, mode, 200, 11, 8);
    CHECK(same_traces(a.traces, b.traces));
    CHECK(same_bits(a.estimate.mean, b.estimate.mean));
    CHECK(same_bits(a.estimate.std_err, b.estimate.std_err));
  }
  CHECK_THROWS_AS(simulate(at(6e6), ModelConfig{}, SimMode::SampledSchedule, 29, 1), PreconditionError);
}

TEST_CASE("event-driven: no helpers means direct data only") {
  const auto traces = run_event_driven(at(6e6, 0.0), ModelConfig{}, 19, 3);
  CHECK(traces.size() == 17);
  for (const auto& t : traces) CHECK(t.v2v_bits == 0.0);
  const auto e = estimate_throughput(at(6e6, 0.0), ModelConfig{}, SimMode::EventDriven, 100, 3);
  CHECK(e.mean == doctest::Approx(6e5).epsilon(1e-12));
  // cycle boundaries come from root finding, so only roundoff remains
  CHECK(e.std_err <= 1e-12 * e.mean);
  CHECK_THROWS_AS(run_event_driven(at(6e6), ModelConfig{}, 2, 3), PreconditionError);
}

TEST_CASE("event-driven traces are well formed and deterministic") {
  const auto a = run_event_driven(at(2e6), ModelConfig{}, 12, 5);
  const auto b = run_event_driven(at(2e6), ModelConfig{}, 12, 5);
  CHECK(same_traces(a, b));
  CHECK(a.size() == 10);
  for (const auto& t : a) {
    CHECK(t.duration > 0);
    CHECK(t.v2i_bits >= 0);
    CHECK(t.v2v_bits >= 0);
    CHECK(t.cluster_count <= t.helper_count);
  }
}

TEST_CASE("event-driven: zero-variance extensions collapse to the base models") {
  ModelConfig g;
  g.mobility = GaussianSpeed{0, 0, 5};
  CHECK(same_traces(run_event_driven(at(1e6), ModelConfig{}, 8, 4), run_event_driven(at(1e6), g, 8, 4)));
  ModelConfig l;
  l.connection = LogNormal{2, 0, 5};
  const auto base = run_event_driven(at(6e6), ModelConfig{}, 8, 4);
  const auto flat = run_event_driven(at(6e6), l, 8, 4);
  REQUIRE(base.size() == flat.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(gen::rel(base[i].v2v_bits, flat[i].v2v_bits) < 1e-6);
  }
}

TEST_CASE("event-driven agrees with sampled mode within 5%") {
  for (double w : {1e6, 6e6}) {
    const Scenario s = at(w, 0.005, 20e3);
    const auto ev = estimate_throughput(s, ModelConfig{}, SimMode::EventDriven, 2000, 7);
    const auto sa = estimate_throughput(s, ModelConfig{}, SimMode::SampledSchedule, 2000, 7);
    CHECK(gen::rel(ev.mean, sa.mean) < 0.05);
  }
}

TEST_CASE("transitional event-driven mean lies within the analytic bounds") {
  const Scenario s = at(2e6, 0.004, 8e3);
  const auto e = estimate_throughput(s, ModelConfig{}, SimMode::EventDriven, 2000, 7);
  const Bounds b = std::get<Bounds>(throughput(s).eta);
  CHECK(e.mean >= b.lower - 3 * e.std_err);
  CHECK(e.mean <= b.upper + 3 * e.std_err);
}

TEST_CASE("throughput is nondecreasing in rho2") {
  double prev_a = 0, prev_s = 0;
  for (double rho : {0.0, 0.002, 0.005, 0.02, 0.1}) {
    const Scenario s = at(6e6, rho);
    const double a = std::get<double>(throughput(s).eta);
    const double m = estimate_throughput(s, ModelConfig{}, SimMode::SampledSchedule, 500, 7).mean;
    CHECK(a >= prev_a);
    CHECK(m >= prev_s);
    prev_a = a;
    prev_s = m;
  }
}
