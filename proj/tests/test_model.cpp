#include <cmath>
#include <limits>

#include "doctest.h"
#include "gen.hpp"
#include "vcoop/model.hpp"

using namespace vcoop;

namespace {

RawParams defaults() {
  return {{"d_km", 10},   {"rI_m", 500},  {"r0_m", 250},  {"wI_mbps", 1},
          {"wV_mbps", 5}, {"v1_mps", 15}, {"v2_mps", 25}, {"rho2_veh_per_m", 0.005}};
}

std::vector<std::string> violations_of(const RawParams& raw) {
  try {
    validate_scenario(raw);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate_scenario converts config units to SI") {
  const Scenario s = validate_scenario(defaults());
  CHECK(s.d == 10000.0);
  CHECK(s.r_I == 500.0);
  CHECK(s.r0 == 250.0);
  CHECK(s.w_I == 1e6);
  CHECK(s.w_V == 5e6);
  CHECK(s.v1 == 15.0);
  CHECK(s.v2 == 25.0);
  CHECK(s.rho2 == 0.005);
  CHECK(s.num_infra == 20);
  CHECK(s == reference_scenario());
}

TEST_CASE("validate_scenario reports schema violations") {
  auto raw = defaults();
  raw.erase("wV_mbps");
  CHECK(contains(violations_of(raw), "missing key wV_mbps"));

  raw = defaults();
  raw["colour"] = 1;
  CHECK(contains(violations_of(raw), "unknown key colour"));

  raw = defaults();
  raw["v2_mps"] = -1;
  CHECK(contains(violations_of(raw), "v2_mps must be non-negative"));

  raw = defaults();
  raw["wI_mbps"] = std::numeric_limits<double>::infinity();
  CHECK(contains(violations_of(raw), "wI_mbps must be finite"));

  raw = defaults();
  raw["num_infra"] = 7.5;
  CHECK(!violations_of(raw).empty());

  // every problem is listed, not only the first
  raw = defaults();
  raw.erase("d_km");
  raw.erase("r0_m");
  const auto v = violations_of(raw);
  CHECK(contains(v, "missing key d_km"));
  CHECK(contains(v, "missing key r0_m"));
}

TEST_CASE("validate_scenario enforces geometric invariants") {
  auto raw = defaults();
  raw["d_km"] = 0.9;
  CHECK(contains(violations_of(raw), "d must exceed 2·r_I"));
  raw["d_km"] = 1.0;  // d == 2 r_I is still rejected
  CHECK(contains(violations_of(raw), "d must exceed 2·r_I"));

  raw = defaults();
  raw["r0_m"] = 600;
  CHECK(contains(violations_of(raw), "r_I must exceed r0"));

  raw = defaults();
  raw["rho2_veh_per_m"] = 0;
  CHECK(violations_of(raw).empty());
}

TEST_CASE("serialize inverts validate_scenario") {
  gen::Gen g(11);
  for (int i = 0; i < 200; ++i) {
    const Scenario s = g.scenario();
    const Scenario back = validate_scenario(serialize(s));
    CHECK(gen::rel(back.d, s.d) < 1e-15);
    CHECK(gen::rel(back.w_I, s.w_I) < 1e-15);
    CHECK(gen::rel(back.w_V, s.w_V) < 1e-15);
    CHECK(back.rho2 == s.rho2);
    CHECK(back.r_I == s.r_I);
  }
}

TEST_CASE("classify_regime thresholds on the evaluation highway") {
  Scenario s = reference_scenario();
  const Regime r = classify_regime(s);
  CHECK(r.w_lo == doctest::Approx(1.5625e6).epsilon(1e-15));
  CHECK(r.w_hi == doctest::Approx(3.125e6).epsilon(1e-15));
  CHECK(r.kind == RegimeKind::InfrastructureLimited);
  s.w_I = 2e6;
  CHECK(classify_regime(s).kind == RegimeKind::Transitional);
  s.w_I = 6e6;
  CHECK(classify_regime(s).kind == RegimeKind::V2VLimited);
  s.w_I = r.w_lo;
  CHECK(classify_regime(s).kind == RegimeKind::InfrastructureLimited);
  s.w_I = r.w_hi;
  CHECK(classify_regime(s).kind == RegimeKind::V2VLimited);
}

TEST_CASE("relative span and rho_min") {
  const Scenario s = reference_scenario();
  CHECK(relative_span(s) == doctest::Approx(24250.0).epsilon(1e-15));
  CHECK(rho_min(s) == doctest::Approx(15.0 / 363750.0).epsilon(1e-14));
}

TEST_CASE("property: thresholds ordered, regimes partition the w_I axis") {
  gen::Gen g(12);
  for (int i = 0; i < 500; ++i) {
    Scenario s = g.scenario();
    const Regime r = classify_regime(s);
    CHECK(r.w_lo < r.w_hi);
    CHECK(r.w_lo / r.w_hi == doctest::Approx(s.r0 / s.r_I).epsilon(1e-13));
    const RegimeKind k = r.kind;
    if (s.w_I <= r.w_lo) CHECK(k == RegimeKind::InfrastructureLimited);
    else if (s.w_I < r.w_hi) CHECK(k == RegimeKind::Transitional);
    else CHECK(k == RegimeKind::V2VLimited);
  }
}
