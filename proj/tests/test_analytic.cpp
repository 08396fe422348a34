#include <cmath>
#include <random>

#include "doctest.h"
#include "gen.hpp"
#include "vcoop/analytic.hpp"

using namespace vcoop;

namespace {

Scenario with(double w_I, double rho2 = 0.005, double d = 10e3) {
  Scenario s = reference_scenario();
  s.w_I = w_I;
  s.rho2 = rho2;
  s.d = d;
  return s;
}

double eta_of(const ThroughputBreakdown& b) { return std::get<double>(b.eta); }

}  // namespace

TEST_CASE("cycle time and direct V2I data") {
  Scenario s = reference_scenario();
  CHECK(expected_cycle_time(s) == doctest::Approx(666.6666666666666).epsilon(1e-15));
  s.d = 15.0;
  CHECK(expected_cycle_time(s) == 1.0);
  s.d = 50e3;
  CHECK(expected_cycle_time(s) == doctest::Approx(3333.333333333333).epsilon(1e-15));
  s = reference_scenario();
  CHECK(expected_v2i_data(s) == doctest::Approx(6.666666666666667e7).epsilon(1e-15));
  s.w_I = 6e6;
  CHECK(expected_v2i_data(s) == doctest::Approx(4e8).epsilon(1e-15));
  s.w_I = 0;
  CHECK(expected_v2i_data(s) == 0.0);
}

TEST_CASE("cluster statistics closed forms") {
  const ClusterStats c = cluster_stats(0.005, 500, 24250);
  CHECK(c.expected_cluster_len == doctest::Approx(28482.63182051532).epsilon(1e-13));
  CHECK(c.expected_gap == 1200.0);
  CHECK(c.expected_first_offset == 200.0);
  CHECK(c.expected_cluster_count == doctest::Approx(0.8102381266400275).epsilon(1e-13));
  CHECK(cluster_stats(0.005, 250, 24250).expected_gap == 700.0);
  CHECK(cluster_stats(0.005, 250, 200).expected_cluster_count == 0.0);
  CHECK_THROWS_WITH_AS(cluster_stats(0.0, 500, 100), "no helpers", PreconditionError);
}

TEST_CASE("cluster statistics against a Monte Carlo cluster oracle") {
  // 1e6 Poisson points, clusters split at gaps > 2r
  const double rho = 0.005, r = 250;
  std::mt19937_64 rng(2024);
  std::exponential_distribution<double> gap(rho);
  double len_sum = 0, cur = 0, gap_sum = 0;
  std::size_t clusters = 0, gaps = 0;
  for (int i = 1; i < 1000000; ++i) {
    const double l = gap(rng);
    if (l <= 2 * r) {
      cur += l;
    } else {
      len_sum += cur;
      ++clusters;
      cur = 0;
      gap_sum += l;
      ++gaps;
    }
  }
  const ClusterStats c = cluster_stats(rho, r, 1e9);
  CHECK(gen::rel(len_sum / clusters, c.expected_cluster_len) < 0.01);
  CHECK(gen::rel(gap_sum / gaps, c.expected_gap) < 0.01);
}

TEST_CASE("eta1, eta2 and the transitional bounds at the evaluation defaults") {
  CHECK(eta_of(throughput_eta1(with(1e6))) == doctest::Approx(1533277.1424803196).epsilon(1e-13));
  CHECK(eta_of(throughput_eta2(with(6e6))) == doctest::Approx(4739222.959330357).epsilon(1e-13));
  const ThroughputBreakdown b = throughput_eta3_bounds(with(2e6));
  const Bounds e = std::get<Bounds>(b.eta);
  CHECK(e.lower == doctest::Approx(3027945.8184388257).epsilon(1e-13));
  CHECK(e.upper == doctest::Approx(3066554.284960639).epsilon(1e-13));
  CHECK(b.transition_point == doctest::Approx(2887943.187433614).epsilon(1e-13));
  CHECK(b.regime.kind == RegimeKind::Transitional);
}

TEST_CASE("throughput dispatches on the regime") {
  CHECK(std::holds_alternative<double>(throughput(with(1e6)).eta));
  CHECK(std::holds_alternative<Bounds>(throughput(with(2e6)).eta));
  CHECK(std::holds_alternative<double>(throughput(with(6e6)).eta));
  CHECK(throughput(with(6e6)).regime.kind == RegimeKind::V2VLimited);
}

TEST_CASE("zero density and zero rate cases") {
  CHECK(eta_of(throughput(with(1e6, 0.0))) == 1e5);
  CHECK(eta_of(throughput(with(6e6, 0.0))) == 6e5);
  CHECK(std::get<double>(throughput(with(1e6, 0.0)).e_v2v_data) == 0.0);
  CHECK(eta_of(throughput(with(0.0))) == 0.0);
  CHECK(noncooperative_throughput(with(1e6)) == 1e5);
  Scenario s = with(6e6);
  s.w_V = 1e-9;
  CHECK(eta_of(throughput_eta2(s)) == doctest::Approx(6e5).epsilon(1e-12));
}

TEST_CASE("regime preconditions are enforced unless skipped") {
  CHECK_THROWS_AS(throughput_eta1(with(6e6)), PreconditionError);
  CHECK_THROWS_AS(throughput_eta2(with(1e6)), PreconditionError);
  CHECK_THROWS_AS(throughput_eta3_bounds(with(1e6)), PreconditionError);
  CHECK_NOTHROW(throughput_eta1(with(6e6), RegimeCheck::Skip));
}

TEST_CASE("bracket clamps at zero below rho_min") {
  const Scenario s = with(1e6, 1e-5);
  CHECK(span_bracket(s) == 0.0);
  CHECK(eta_of(throughput(s)) == doctest::Approx(1e5).epsilon(1e-15));
}

TEST_CASE("transition point tends to w_lo and w_hi") {
  const double lo = transition_point(with(2e6, 1e-4));
  const double mid = transition_point(with(2e6, 0.005));
  const double hi = transition_point(with(2e6, 0.1));
  CHECK(lo == doctest::Approx(1601554.3640131562).epsilon(1e-12));
  CHECK(hi == doctest::Approx(3.125e6).epsilon(1e-12));
  CHECK(lo < mid);
  CHECK(mid < hi);
  CHECK(lo > 1.5625e6);
}

TEST_CASE("property: boundary continuity of the transitional lower bound") {
  gen::Gen g(21);
  for (int i = 0; i < 100; ++i) {
    Scenario s = g.scenario();
    const Regime r = classify_regime(s);
    s.w_I = r.w_lo;
    const double l1 = std::get<Bounds>(throughput_eta3_bounds(s, RegimeCheck::Skip).eta).lower;
    CHECK(gen::rel(l1, eta_of(throughput_eta1(s, RegimeCheck::Skip))) <= 1e-12);
    s.w_I = r.w_hi;
    const double l2 = std::get<Bounds>(throughput_eta3_bounds(s, RegimeCheck::Skip).eta).lower;
    CHECK(gen::rel(l2, eta_of(throughput_eta2(s, RegimeCheck::Skip))) <= 1e-12);
  }
}

TEST_CASE("property: lower <= upper and eta = (D_I + D_V) / T") {
  gen::Gen g(22);
  for (int i = 0; i < 500; ++i) {
    Scenario s = g.scenario();
    const Regime r = classify_regime(s);
    s.w_I = r.w_lo + (r.w_hi - r.w_lo) * g.uniform(0.001, 0.999);
    const ThroughputBreakdown b = throughput(s);
    const Bounds e = std::get<Bounds>(b.eta);
    CHECK(e.lower <= e.upper * (1 + 1e-12));
    CHECK(gen::rel(e.lower, (b.e_v2i_data + lower_of(b.e_v2v_data)) / b.e_cycle_time) < 1e-12);
    CHECK(gen::rel(e.upper, (b.e_v2i_data + upper_of(b.e_v2v_data)) / b.e_cycle_time) < 1e-12);
    CHECK(lower_of(b.e_v2v_data) >= 0.0);
  }
}

TEST_CASE("property: eta1 and eta2 nondecreasing in w_I and rho2") {
  gen::Gen g(23);
  for (int i = 0; i < 300; ++i) {
    const Scenario s = g.scenario();
    const Regime r = classify_regime(s);
    Scenario a = s, b = s;
    a.w_I = r.w_lo * g.uniform(0.0, 1.0);
    b.w_I = a.w_I + (r.w_lo - a.w_I) * g.uniform(0.0, 1.0);
    CHECK(eta_of(throughput_eta1(a)) <= eta_of(throughput_eta1(b)) * (1 + 1e-12));
    a.w_I = b.w_I = r.w_hi * g.uniform(1.0, 3.0);
    b.rho2 = a.rho2 * g.uniform(1.0, 10.0);
    CHECK(eta_of(throughput_eta2(a)) <= eta_of(throughput_eta2(b)) * (1 + 1e-12));
    a.w_I = b.w_I = r.w_lo * g.uniform(0.1, 1.0);
    CHECK(eta_of(throughput_eta1(a)) <= eta_of(throughput_eta1(b)) * (1 + 1e-12));
  }
}
