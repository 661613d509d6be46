#pragma once

#include <vector>

#include "finsler/geom/metric_spec.hpp"
#include "finsler/jet/jet.hpp"

namespace finsler {

struct ChartPoint {
  std::vector<double> x, y;
};

// Half-angle of the excluded cone around the finsleroid axis and the matching q guard:
// the family is y-local, singular where q = 0, so evaluation refuses a neighbourhood of the
// axis instead of regularizing it.
inline constexpr double kAxisConeSine = 1e-3;
inline constexpr double kAxisGuardFraction = 1e-6; // q > 1e-6 * |y|_a

// Direct scalar evaluation of the energy E = F^2/2. This path shares no code with the jet
// path, so the finite-difference oracle can certify jets against it.
double energy_value(const MetricSpec& spec, const ChartPoint& p);

// Jet of E at the point. Throws slit/axis/admissibility errors exactly like energy_value.
Jet energy_jet(const MetricSpec& spec, const ChartPoint& p, const DegreeCaps& caps);

// Per-point finsleroid quantities (axis 1-form value, transverse norm, charge data, the
// angular coordinate Phi, raised axis and the axis-orthogonal part of y).
struct FinsleroidData {
  double b = 0;     // b_i y^i
  double q = 0;     // sqrt(r_ij y^i y^j), r = a - b b
  double g = 0;     // charge
  double h = 0;     // sqrt(1 - g^2/4)
  double G = 0;     // g/h
  double phi = 0;   // arctan((2b + g q)/(2 h q))
  double ayy = 0;   // a_ij y^i y^j
  std::vector<double> b_up; // b^l = a^{lk} b_k
  std::vector<double> v_up; // v^l = y^l - b b^l
  std::vector<double> b_low, a, a_inv;
};

FinsleroidData finsleroid_data(const MetricSpec& spec, const ChartPoint& p);

// Agreement of the piecewise and arctan forms of Phi at the point, plus a staged b -> 0
// probe: |Phi - arctan(G/2)| evaluated at |b| = limit_b with the transverse norm chosen
// large enough that the bound is meaningful (dPhi/db ~ h/q near b = 0).
struct PhiReport {
  double branch_residual = 0;
  double phi = 0;
  int branch = 0;        // sign of b at the probe point
  double limit_b = 0;
  double limit_error = 0;
};

PhiReport phi_forms_agree(const MetricSpec& spec, const ChartPoint& p);

// Admissibility guard shared by samplers and evaluators; throws on violation.
void check_admissible(const MetricSpec& spec, const ChartPoint& p);
bool is_admissible(const MetricSpec& spec, const ChartPoint& p);

} // namespace finsler
