#pragma once

#include <variant>

#include "vcoop/model.hpp"

namespace vcoop {

struct ClusterStats {
  double expected_cluster_len = 0.0;
  double expected_gap = 0.0;
  double expected_first_offset = 0.0;
  double expected_cluster_count = 0.0;
  double radius_used = 0.0;
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Point value, or a [lower, upper] pair in the transitional regime.
using Quantity = std::variant<double, Bounds>;

struct ThroughputBreakdown {
  double e_cycle_time = 0.0;
  double e_v2i_data = 0.0;
  Quantity e_v2v_data = 0.0;
  Quantity eta = 0.0;
  Regime regime;
  double transition_point = 0.0;  // only set by the transitional bounds
};

enum class RegimeCheck { Enforce, Skip };

double expected_cycle_time(const Scenario& s);
double expected_v2i_data(const Scenario& s);

/// Cluster statistics of a Poisson(rho2) stream under cluster radius
/// `radius` (helpers within 2*radius of each other share a cluster).
/// Throws PreconditionError("no helpers") when rho2 == 0.
ClusterStats cluster_stats(double rho2, double radius, double span);

/// The common factor (d-2r_I)(v1+v2) + r0 v1 - v1/rho2, clamped at 0.
double span_bracket(const Scenario& s);

ThroughputBreakdown throughput_eta1(const Scenario& s, RegimeCheck check = RegimeCheck::Enforce);
ThroughputBreakdown throughput_eta2(const Scenario& s, RegimeCheck check = RegimeCheck::Enforce);
ThroughputBreakdown throughput_eta3_bounds(const Scenario& s,
                                           RegimeCheck check = RegimeCheck::Enforce);
ThroughputBreakdown throughput(const Scenario& s);

/// rho2 = 0 baseline: 2 r_I w_I / d.
double noncooperative_throughput(const Scenario& s);

/// w_I at which the two transitional upper-bound branches cross.
double transition_point(const Scenario& s);

// Helpers for callers that want a number from a Quantity.
double lower_of(const Quantity& q);
double upper_of(const Quantity& q);

}  // namespace vcoop
