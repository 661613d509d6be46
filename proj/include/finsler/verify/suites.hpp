#pragma once

#include <optional>
#include <string>

#include "finsler/geom/conformal.hpp"
#include "finsler/geom/riccati.hpp"
#include "finsler/verify/report.hpp"

namespace finsler {

struct SuiteOptions {
  uint64_t seed = 0;
  int samples = 100;
  int directions = 40;
  int grid = 101;
  double tol_scale = 1.0; // multiplies every tolerance
  std::optional<PolyScalar> alpha_override;
};

// Named check suites. Conditional (rigidity/compare) checks first establish the invariance
// hypothesis on the sample; when it does not hold they report
// "hypothesis-not-established" instead of failing, because a generic pair failing the
// hypothesis is correct behavior, not an error.
//
// suite is one of: identities, conformal, rigidity, riccati, compare, all.
CheckReport run_suite(const std::string& suite, const MetricSpec& spec, const SuiteOptions& opt);

// The scale function paired with a spec for the conformal machinery: an explicit override,
// the wrapper's own alpha for conformal specs, the axis linear form for finsleroid specs,
// x^1 otherwise.
PolyScalar suite_alpha(const MetricSpec& spec, const SuiteOptions& opt);

} // namespace finsler
