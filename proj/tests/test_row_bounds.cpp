#include "doctest.h"
#include "vcoop/experiments.hpp"

using namespace vcoop;

// Transitional rows: the sampled LP optimum is compared against the
// closed-form bounds with a 3 standard-error allowance.
TEST_CASE("transitional rows: sampled optimum within analytic bounds") {
  FigurePreset p = figure_preset("fig4c", 7);
  override_run(p, 500, std::nullopt);
  for (auto& s : p.series) {
    if (s.spec.base.rho2 > 0.005) continue;
    s.spec.values = {8, 10, 20};
    for (const auto& r : run_sweep(s.spec)) {
      REQUIRE(r.regime == RegimeKind::Transitional);
      INFO("rho2=" << s.spec.base.rho2 << " d_km=" << r.axis_value << " sampled=" << r.sampled->mean
                   << " lower=" << *r.eta_lower << " upper=" << *r.eta_upper);
      CHECK(r.sampled->mean >= *r.eta_lower - 3 * r.sampled->std_err);
      CHECK(r.sampled->mean <= *r.eta_upper + 3 * r.sampled->std_err);
    }
  }
}
