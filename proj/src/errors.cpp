#include "finsler/errors.hpp"

namespace finsler {

const char* errc_name(errc c) {
  switch (c) {
    case errc::config: return "config";
    case errc::schema: return "schema";
    case errc::order_budget: return "order-budget";
    case errc::singular_eval: return "singular-evaluation";
    case errc::slit_violation: return "slit-violation";
    case errc::axis_singularity: return "axis-singularity";
    case errc::convexity_failure: return "convexity-failure";
    case errc::inadmissible_point: return "inadmissible-point";
    case errc::regularity_violation: return "regularity-violation";
    case errc::excluded_ray: return "excluded-ray";
    case errc::degenerate_plane: return "degenerate-plane";
    case errc::dimension: return "dimension";
    case errc::admissibility: return "admissibility";
  }
  return "unknown";
}

} // namespace finsler
