#pragma once

#include <vector>

#include "finsler/geom/conformal.hpp"

namespace finsler {

// Restriction of the verification problem to the line c(t) = v + t X*(p): the energy
// profile y(t) = E(c(t)), its logarithmic derivative z = y'/y, the closed-form solution of
// the Riccati equation z satisfies, and the comparison of the integrated profile with the
// finsleroid energy.

// z(t) = 2 (2t + K F*) / (2 t^2 + t K F* + 4 E*). Requires -4 < K < 4 (the solution must
// exist for all real t), F* > 0, and E* = F*^2 / 2.
double closed_form_z(double K, double fstar, double estar, double t);
// Analytic derivative of the closed form (quotient rule, no numerical differentiation).
double closed_form_z_prime(double K, double fstar, double estar, double t);

struct RiccatiSample {
  double t = 0, z = 0, z_prime = 0;
};

// Max residual of (a^2 + t^2 b^2 (1-b^2)) z' + (1/2)(a^2 + t^2 b^2 (1-2b^2)) z^2
//                + 2 t b^4 z - 2 b^4 over the samples. b^2 = 1 gives the reduced form
// a^2 z' + (1/2)(a^2 - t^2) z^2 + 2 t z - 2.
double riccati_residual(const std::vector<RiccatiSample>& samples, double a2, double b2);

// A(v,t), the angular exponent of the integrated profile; A(v,0) = 0.
double line_exponent(double K, double fstar, double t);
// E(v + t X*) = K* (F*^2 + K F* t / 2 + t^2) e^{2 A(v,t)}.
double energy_along_line(double K, double kstar, double fstar, double t);

// Classical fourth-order one-step integration of the reduced equation starting from the
// closed form at t0. steps >= 100; |z| > 1e12 aborts as a blow-up.
std::vector<RiccatiSample> integrate_numerically(double K, double fstar, double t0, double t1,
                                                 int steps);

struct LineProfileReport {
  double fstar = 0;
  double kstar = 0;
  double k_measured = 0;       // F*(v) y'(0)/y(0)
  double profile_residual = 0; // relative, metric energy vs integrated profile
  double logderiv_residual = 0;
  size_t grid = 0, skipped = 0;
};

// Samples E(c(t)) through the metric itself and compares it against the integrated
// profile with K measured from the initial slope. v must satisfy v(alpha) = 0.
LineProfileReport extract_line_profile(const MetricSpec& spec, const PolyScalar& alpha,
                                       const std::vector<double>& p, const std::vector<double>& v,
                                       double t0, double t1, int npoints);

struct ProfileFamilyReport {
  double K = 0, kstar = 0, fstar = 0;
  double energy_residual = 0;    // integrated profile vs scaled finsleroid energy
  double quadratic_identity = 0; // (b^2 + g q b + q^2)(c(t)) vs t^2 + (K/2) F* t + F*^2
  double phi_identity = 0;       // Phi(c(t)) vs arctan((4t/F* + K)/sqrt(16 - K^2))
  size_t grid = 0, skipped = 0;
};

// Compares the integrated profile against the finsleroid energy evaluated along the line,
// with the charge correspondence K = 2 g(p).
ProfileFamilyReport compare_profile_with_family(const MetricSpec& spec, const PolyScalar& alpha,
                                const std::vector<double>& p, const std::vector<double>& v,
                                double t0, double t1, int npoints);

} // namespace finsler
