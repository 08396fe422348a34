#include "vcoop/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace vcoop {
namespace {

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out << "; ";
    out << parts[i];
  }
  return out.str();
}

struct KeySpec {
  const char* name;
  double to_si;  // multiplier from config unit to SI
  bool required;
};

constexpr KeySpec kKeys[] = {
    {"d_km", 1e3, true},
    {"rI_m", 1.0, true},
    {"r0_m", 1.0, true},
    {"wI_mbps", 1e6, true},
    {"wV_mbps", 1e6, true},
    {"v1_mps", 1.0, true},
    {"v2_mps", 1.0, true},
    {"rho2_veh_per_m", 1.0, true},
    {"rho1_veh_per_m", 1.0, false},
    {"num_infra", 1.0, false},
};

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

std::vector<std::string> scenario_violations(const Scenario& s) {
  std::vector<std::string> out;
  const auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) {
      out.push_back(std::string(name) + " must be finite");
      return false;
    }
    return true;
  };
  const bool ok_d = finite(s.d, "d");
  const bool ok_ri = finite(s.r_I, "r_I");
  const bool ok_r0 = finite(s.r0, "r0");
  finite(s.w_I, "w_I");
  finite(s.w_V, "w_V");
  finite(s.v1, "v1");
  finite(s.v2, "v2");
  finite(s.rho2, "rho2");
  finite(s.rho1, "rho1");

  if (ok_d && ok_ri && !(s.d > 2.0 * s.r_I)) out.emplace_back("d must exceed 2·r_I");
  if (ok_ri && ok_r0 && !(s.r_I > s.r0)) out.emplace_back("r_I must exceed r0");
  if (ok_r0 && !(s.r0 > 0.0)) out.emplace_back("r0 must be positive");
  if (!(s.v1 > 0.0)) out.emplace_back("v1 must be positive");
  if (!(s.v2 > 0.0)) out.emplace_back("v2 must be positive");
  if (!(s.w_I >= 0.0)) out.emplace_back("w_I must be non-negative");
  if (!(s.w_V > 0.0)) out.emplace_back("w_V must be positive");
  if (!(s.rho2 >= 0.0)) out.emplace_back("rho2 must be non-negative");
  if (!(s.rho1 >= 0.0)) out.emplace_back("rho1 must be non-negative");
  if (s.num_infra < 2) out.emplace_back("num_infra must be at least 2");
  return out;
}

void require_valid(const Scenario& s) {
  auto v = scenario_violations(s);
  if (!v.empty()) throw ValidationError(std::move(v));
}

Scenario validate_scenario(const RawParams& raw) {
  std::vector<std::string> problems;
  std::set<std::string> known;
  for (const auto& k : kKeys) known.insert(k.name);
  for (const auto& [key, value] : raw) {
    (void)value;
    if (!known.count(key)) problems.push_back("unknown key " + key);
  }

  std::map<std::string, double> si;
  for (const auto& k : kKeys) {
    auto it = raw.find(k.name);
    if (it == raw.end()) {
      if (k.required) problems.push_back(std::string("missing key ") + k.name);
      continue;
    }
    if (!std::isfinite(it->second)) {
      problems.push_back(std::string(k.name) + " must be finite");
      continue;
    }
    if (it->second < 0.0) {
      problems.push_back(std::string(k.name) + " must be non-negative");
      continue;
    }
    si[k.name] = it->second * k.to_si;
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  Scenario s;
  s.d = si.at("d_km");
  s.r_I = si.at("rI_m");
  s.r0 = si.at("r0_m");
  s.w_I = si.at("wI_mbps");
  s.w_V = si.at("wV_mbps");
  s.v1 = si.at("v1_mps");
  s.v2 = si.at("v2_mps");
  s.rho2 = si.at("rho2_veh_per_m");
  if (auto it = si.find("rho1_veh_per_m"); it != si.end()) s.rho1 = it->second;
  if (auto it = si.find("num_infra"); it != si.end()) {
    if (it->second != std::floor(it->second)) {
      throw ValidationError({"num_infra must be an integer"});
    }
    s.num_infra = static_cast<int>(it->second);
  }
  require_valid(s);
  return s;
}

RawParams serialize(const Scenario& s) {
  return {
      {"d_km", s.d / 1e3},
      {"rI_m", s.r_I},
      {"r0_m", s.r0},
      {"wI_mbps", s.w_I / 1e6},
      {"wV_mbps", s.w_V / 1e6},
      {"v1_mps", s.v1},
      {"v2_mps", s.v2},
      {"rho2_veh_per_m", s.rho2},
      {"rho1_veh_per_m", s.rho1},
      {"num_infra", static_cast<double>(s.num_infra)},
  };
}

Regime classify_regime(const Scenario& s) {
  Regime r;
  r.w_hi = s.w_V * s.v2 / (s.v1 + s.v2);
  r.w_lo = s.r0 * r.w_hi / s.r_I;
  if (s.w_I >= r.w_hi) {
    r.kind = RegimeKind::V2VLimited;
  } else if (s.w_I <= r.w_lo) {
    // w_I = 0 lands here too; every closed form then degenerates to zero.
    r.kind = RegimeKind::InfrastructureLimited;
  } else {
    r.kind = RegimeKind::Transitional;
  }
  return r;
}

double relative_span(const Scenario& s) {
  return (s.d - 2.0 * s.r_I) * (s.v1 + s.v2) / s.v1 + s.r0;
}

double rho_min(const Scenario& s) {
  return s.v1 / ((s.d - 2.0 * s.r_I) * (s.v1 + s.v2) + s.r0 * s.v1);
}

Scenario reference_scenario() {
  Scenario s;
  s.d = 10e3;
  s.r_I = 500.0;
  s.r0 = 250.0;
  s.w_I = 1e6;
  s.w_V = 5e6;
  s.v1 = 15.0;
  s.v2 = 25.0;
  s.rho2 = 0.005;
  return s;
}

const char* to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::InfrastructureLimited:
      return "InfrastructureLimited";
    case RegimeKind::Transitional:
      return "Transitional";
    case RegimeKind::V2VLimited:
      return "V2VLimited";
  }
  return "?";
}

}  // namespace vcoop
