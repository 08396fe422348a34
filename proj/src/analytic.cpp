#include "vcoop/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vcoop {
namespace {

void expect_regime(const Scenario& s, RegimeKind want, RegimeCheck check, const char* who) {
  if (check == RegimeCheck::Skip) return;
  const Regime r = classify_regime(s);
  if (r.kind != want) {
    throw PreconditionError(std::string(who) + " requires regime " + to_string(want) +
                            ", scenario is " + to_string(r.kind));
  }
}

// 1 - exp(-x), accurate for small x
double one_minus_exp_neg(double x) { return -std::expm1(-x); }

ThroughputBreakdown base(const Scenario& s) {
  ThroughputBreakdown b;
  b.e_cycle_time = expected_cycle_time(s);
  b.e_v2i_data = expected_v2i_data(s);
  b.regime = classify_regime(s);
  return b;
}

ThroughputBreakdown point(const Scenario& s, double c) {
  ThroughputBreakdown b = base(s);
  b.e_v2v_data = c / s.v1;
  b.eta = (2.0 * s.r_I * s.w_I + c) / s.d;
  return b;
}

double c1(const Scenario& s) {
  return span_bracket(s) * one_minus_exp_neg(2.0 * s.rho2 * s.r_I) * s.w_I / s.v2;
}

double c2(const Scenario& s) {
  return span_bracket(s) * one_minus_exp_neg(2.0 * s.rho2 * s.r0) * s.w_V / (s.v1 + s.v2);
}

double c3(const Scenario& s) {
  if (s.w_I <= 0.0) return 0.0;
  const double radius = s.r0 * s.w_V * s.v2 / (s.w_I * (s.v1 + s.v2));
  return span_bracket(s) * one_minus_exp_neg(2.0 * s.rho2 * radius) * s.w_I / s.v2;
}

}  // namespace

double expected_cycle_time(const Scenario& s) { return s.d / s.v1; }

double expected_v2i_data(const Scenario& s) { return 2.0 * s.r_I * s.w_I / s.v1; }

ClusterStats cluster_stats(double rho2, double radius, double span) {
  if (!(rho2 > 0.0)) throw PreconditionError("no helpers");
  if (!(radius > 0.0)) throw PreconditionError("radius must be positive");
  if (!(span > 0.0)) throw PreconditionError("span must be positive");
  const double x = 2.0 * rho2 * radius;
  ClusterStats c;
  c.radius_used = radius;
  // (e^x - 1)(1/rho - 2r e^-x/(1-e^-x)) simplifies to (e^x - 1)/rho - 2r
  c.expected_cluster_len = std::expm1(x) / rho2 - 2.0 * radius;
  c.expected_gap = 2.0 * radius + 1.0 / rho2;
  c.expected_first_offset = 1.0 / rho2;
  c.expected_cluster_count =
      std::max(0.0, (span - c.expected_first_offset) / (c.expected_cluster_len + c.expected_gap));
  return c;
}

double span_bracket(const Scenario& s) {
  if (!(s.rho2 > 0.0)) return 0.0;
  const double b = (s.d - 2.0 * s.r_I) * (s.v1 + s.v2) + s.r0 * s.v1 - s.v1 / s.rho2;
  return std::max(0.0, b);
}

double noncooperative_throughput(const Scenario& s) { return 2.0 * s.r_I * s.w_I / s.d; }

ThroughputBreakdown throughput_eta1(const Scenario& s, RegimeCheck check) {
  require_valid(s);
  expect_regime(s, RegimeKind::InfrastructureLimited, check, "throughput_eta1");
  return point(s, c1(s));
}

ThroughputBreakdown throughput_eta2(const Scenario& s, RegimeCheck check) {
  require_valid(s);
  expect_regime(s, RegimeKind::V2VLimited, check, "throughput_eta2");
  return point(s, c2(s));
}

double transition_point(const Scenario& s) {
  const double w_hi = s.w_V * s.v2 / (s.v1 + s.v2);
  if (!(s.rho2 > 0.0)) return s.r0 / s.r_I * w_hi;
  return one_minus_exp_neg(2.0 * s.rho2 * s.r0) / one_minus_exp_neg(2.0 * s.rho2 * s.r_I) * w_hi;
}

ThroughputBreakdown throughput_eta3_bounds(const Scenario& s, RegimeCheck check) {
  require_valid(s);
  expect_regime(s, RegimeKind::Transitional, check, "throughput_eta3_bounds");
  ThroughputBreakdown b = base(s);
  const double lo_c = c3(s);
  const double up_c = std::min(c1(s), c2(s));
  b.e_v2v_data = Bounds{lo_c / s.v1, up_c / s.v1};
  const double direct = 2.0 * s.r_I * s.w_I;
  b.eta = Bounds{(direct + lo_c) / s.d, (direct + up_c) / s.d};
  b.transition_point = transition_point(s);
  return b;
}

ThroughputBreakdown throughput(const Scenario& s) {
  switch (classify_regime(s).kind) {
    case RegimeKind::InfrastructureLimited:
      return throughput_eta1(s);
    case RegimeKind::V2VLimited:
      return throughput_eta2(s);
    case RegimeKind::Transitional:
      return throughput_eta3_bounds(s);
  }
  return {};
}

double lower_of(const Quantity& q) {
  if (const auto* b = std::get_if<Bounds>(&q)) return b->lower;
  return std::get<double>(q);
}

double upper_of(const Quantity& q) {
  if (const auto* b = std::get_if<Bounds>(&q)) return b->upper;
  return std::get<double>(q);
}

}  // namespace vcoop
