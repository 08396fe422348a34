#include "vcoop/channel.hpp"

#include <algorithm>
#include <cmath>

#include "vcoop/model.hpp"

namespace vcoop {
namespace {

double slice_distance(const LinkProfile& link, int segments, int k) {
  const double width = 2.0 * link.half_length / segments;
  return std::max(1.0, std::abs(-link.half_length + (k + 0.5) * width));
}

}  // namespace

std::vector<std::string> model_violations(const ModelConfig& m) {
  std::vector<std::string> out;
  if (const auto* g = std::get_if<GaussianSpeed>(&m.mobility)) {
    if (!(g->sigma1 >= 0.0) || !(g->sigma2 >= 0.0)) out.emplace_back("gaussian sigmas must be >= 0");
    if (!(g->tau > 0.0)) out.emplace_back("gaussian tau must be positive");
  }
  if (const auto* l = std::get_if<LogNormal>(&m.connection)) {
    if (!(l->sigma >= 0.0)) out.emplace_back("log_normal sigma must be >= 0");
    if (!(l->alpha > 0.0)) out.emplace_back("log_normal alpha must be positive");
    if (!(l->tau > 0.0)) out.emplace_back("log_normal tau must be positive");
  }
  if (const auto* r = std::get_if<RayleighPathLoss>(&m.channel)) {
    if (r->segments < 1) out.emplace_back("segments must be >= 1");
    if (!(r->B_I > 0.0) || !(r->B_V > 0.0)) out.emplace_back("bandwidths must be positive");
    if (!std::isfinite(r->P_I_dbm) || !std::isfinite(r->P_V_dbm)) {
      out.emplace_back("powers must be finite");
    }
  }
  return out;
}

void require_valid(const ModelConfig& m) {
  auto v = model_violations(m);
  if (!v.empty()) throw ValidationError(std::move(v));
}

double model_tau(const ModelConfig& m) {
  if (const auto* g = std::get_if<GaussianSpeed>(&m.mobility)) return g->tau;
  if (const auto* l = std::get_if<LogNormal>(&m.connection)) return l->tau;
  return 5.0;
}

LinkProfile v2i_profile(const RayleighPathLoss& ch, double r_I) {
  return {r_I, ch.B_I, ch.P_I_dbm};
}

LinkProfile v2v_profile(const RayleighPathLoss& ch, double r0) {
  return {r0, ch.B_V, ch.P_V_dbm};
}

double segment_rate(const LinkProfile& link, double distance, double beta) {
  const double p_mw = std::pow(10.0, link.power_dbm / 10.0);
  const double dist = std::max(1.0, distance);
  const double gain = beta * beta / (dist * dist * dist * dist);
  return link.bandwidth * std::log2(1.0 + p_mw * gain);
}

double effective_rate(const RayleighPathLoss& ch, const LinkProfile& link, Stream& stream) {
  std::normal_distribution<double> beta(0.0, 1.0);
  double sum = 0.0;
  for (int k = 0; k < ch.segments; ++k) {
    sum += segment_rate(link, slice_distance(link, ch.segments, k), beta(stream));
  }
  return sum / ch.segments;
}

double effective_rate_fixed(const LinkProfile& link, int segments, double beta) {
  double sum = 0.0;
  for (int k = 0; k < segments; ++k) {
    sum += segment_rate(link, slice_distance(link, segments, k), beta);
  }
  return sum / segments;
}

}  // namespace vcoop
