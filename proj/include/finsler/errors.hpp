#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

// Failure categories surfaced by the library. The CLI maps schema/config/usage errors to
// exit code 2; everything else is a runtime evaluation failure reported in-band.
enum class errc {
  config,               // bad caps, bad dimension, bad options
  schema,               // malformed spec document
  order_budget,         // multi-index outside the truncation set
  singular_eval,        // elementary composition outside its domain
  slit_violation,       // y = 0
  axis_singularity,     // finsleroid q below the axis guard
  convexity_failure,    // fundamental tensor not positive definite
  inadmissible_point,   // point outside the spec's admissible region
  regularity_violation, // d_x alpha = 0 where a conformal pack needs it
  excluded_ray,         // projected field vanishes (eta ~ 0)
  degenerate_plane,     // Gram of a sectional-curvature plane ~ 0
  dimension,            // n too small for the requested machinery
  admissibility,        // riccati parameter out of range (|K| >= 4 etc.)
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what, double offending = 0.0)
      : std::runtime_error(what), code_(code), offending_(offending) {}

  errc code() const { return code_; }
  // Offending value for singular evaluations (e.g. the negative radicand).
  double offending() const { return offending_; }

private:
  errc code_;
  double offending_;
};

[[noreturn]] inline void fail(errc code, const std::string& what, double offending = 0.0) {
  throw error(code, what, offending);
}

} // namespace finsler
