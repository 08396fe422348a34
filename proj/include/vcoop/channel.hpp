#pragma once

#include <string>
#include <variant>
#include <vector>

#include "vcoop/rng.hpp"

namespace vcoop {

struct ConstantSpeed {};
struct GaussianSpeed {
  double sigma1 = 2.0;  // VoI speed deviation, m/s
  double sigma2 = 2.0;  // helper speed deviation, m/s
  double tau = 5.0;     // speed-change interval, s
};

struct UnitDisk {};
struct LogNormal {
  double alpha = 2.0;  // path-loss exponent
  double sigma = 4.0;  // shadowing deviation, dB
  double tau = 5.0;    // re-draw interval, s
};

struct ConstantRate {};
struct RayleighPathLoss {
  double B_I = 40e6;       // Hz
  double P_I_dbm = 52.0;
  double B_V = 5e6;        // Hz
  double P_V_dbm = 20.0;
  int segments = 1000;
};

using Mobility = std::variant<ConstantSpeed, GaussianSpeed>;
using Connection = std::variant<UnitDisk, LogNormal>;
using Channel = std::variant<ConstantRate, RayleighPathLoss>;

struct ModelConfig {
  Mobility mobility = ConstantSpeed{};
  Connection connection = UnitDisk{};
  Channel channel = ConstantRate{};
};

std::vector<std::string> model_violations(const ModelConfig& m);
void require_valid(const ModelConfig& m);

/// Time grid shared by speed changes and shadowing redraws.
double model_tau(const ModelConfig& m);

/// A link traversed once end to end: the mobile moves from -half_length to
/// +half_length past the other endpoint.
struct LinkProfile {
  double half_length = 0.0;  // m
  double bandwidth = 0.0;    // Hz
  double power_dbm = 0.0;
};

LinkProfile v2i_profile(const RayleighPathLoss& ch, double r_I);
LinkProfile v2v_profile(const RayleighPathLoss& ch, double r0);

/// Shannon rate at one point: B log2(1 + P beta^2 dist^-4), dist floored at 1 m,
/// P converted from dBm to mW.
double segment_rate(const LinkProfile& link, double distance, double beta);

/// Averages segment_rate over `segments` equal slices of the traverse, a
/// fresh beta ~ N(0,1) per slice.
double effective_rate(const RayleighPathLoss& ch, const LinkProfile& link, Stream& stream);

/// As effective_rate with every slice using the same fixed beta.
double effective_rate_fixed(const LinkProfile& link, int segments, double beta);

}  // namespace vcoop
