#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcoop {

// Physical, radio and traffic parameters of one highway deployment.
// All fields are strict SI: metres, seconds, bit/s, vehicles per metre.
struct Scenario {
  double d = 0.0;      // inter-infrastructure spacing
  double r_I = 0.0;    // infrastructure radio range
  double r0 = 0.0;     // vehicle radio range
  double w_I = 0.0;    // V2I rate
  double w_V = 0.0;    // V2V rate
  double v1 = 0.0;     // speed of the vehicle of interest
  double v2 = 0.0;     // speed of the opposing helper stream
  double rho2 = 0.0;   // helper density
  double rho1 = 0.0;   // same-direction density; carried as metadata, never used
  int num_infra = 20;  // infrastructure points per event-driven replication

  bool operator==(const Scenario&) const = default;
};

enum class RegimeKind { InfrastructureLimited, Transitional, V2VLimited };

struct Regime {
  RegimeKind kind = RegimeKind::InfrastructureLimited;
  double w_lo = 0.0;  // r0*w_V*v2 / (r_I*(v1+v2))
  double w_hi = 0.0;  // w_V*v2 / (v1+v2)
};

// One realisation of the helpers met during a cycle: `count` helpers, the
// first at `first_offset` into [0, span], then `gaps` between consecutive ones.
struct HelperConfig {
  std::size_t count = 0;
  double first_offset = 0.0;
  std::vector<double> gaps;  // count - 1 entries
};

// Raised when a scenario (or config) violates one or more invariants. Every
// violation is listed, not just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Raised when an operation is called outside its precondition (wrong regime,
// too few samples, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter map in config units, keyed by the config file names
// (d_km, rI_m, r0_m, wI_mbps, wV_mbps, v1_mps, v2_mps, rho2_veh_per_m,
// rho1_veh_per_m, num_infra).
using RawParams = std::map<std::string, double>;

/// Converts a config-unit parameter map into a validated SI Scenario.
/// Throws ValidationError naming every missing/unknown key and every
/// violated invariant.
Scenario validate_scenario(const RawParams& raw);

/// Inverse of validate_scenario: SI Scenario back to config units.
RawParams serialize(const Scenario& s);

/// Invariant check on an SI scenario. Empty result means valid.
std::vector<std::string> scenario_violations(const Scenario& s);

/// Throws ValidationError if `s` violates any invariant.
void require_valid(const Scenario& s);

Regime classify_regime(const Scenario& s);

/// Relative road span whose helpers can reach the VoI during one V2V phase:
/// (d - 2 r_I)(v1 + v2)/v1 + r0.
double relative_span(const Scenario& s);

/// Smallest helper density for which the closed-form V2V terms are
/// non-negative: v1 / ((d - 2 r_I)(v1 + v2) + r0 v1).
double rho_min(const Scenario& s);

/// The highway used throughout the evaluation: r_I = 500 m, r0 = 250 m,
/// v1 = 15 m/s, v2 = 25 m/s, w_V = 5 Mb/s, d = 10 km, w_I = 1 Mb/s,
/// rho2 = 0.005 veh/m.
Scenario reference_scenario();

const char* to_string(RegimeKind kind);

}  // namespace vcoop
