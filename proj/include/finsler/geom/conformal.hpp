#pragma once

#include <optional>
#include <vector>

#include "finsler/geom/tensor_pack.hpp"

namespace finsler {

// Everything attached to a conformal pair (F, alpha) at one point: the gradient field
// X^l = g^{lm} alpha_m with its y-derivatives, the projected field eta, the spray
// difference B^l = (y^m alpha_m) y^l - E X^l with its second and third y-derivatives, the
// associated quadratic energy E* = E X^l alpha_l with its Hessian, and the proportionality
// factor theta of the projected field.
struct ConformalPack {
  int n = 0;
  ChartPoint point;
  TensorPack pack; // tensors of the unwrapped metric at the point

  double alpha_value = 0;
  std::vector<double> alpha_grad; // alpha_i, position gradient (exact polynomial derivative)

  std::vector<Jet> x_jet;   // X^l at (x_cap, 3)
  Jet xsq_jet;              // X^l alpha_l
  Jet estar_jet;            // E X^l alpha_l
  std::vector<Jet> b_jet;   // B^l

  std::vector<double> x_up;       // X^l
  std::vector<double> x_d1;       // [l][i] X^l_i
  std::vector<double> x_d2;       // [l][i][j] X^l_ij
  std::vector<double> x_d2_alpha; // [i][j] X^l_ij alpha_l, from the X^l alpha_l jet
  std::vector<double> xi_up;      // xi^l = X^s X^l_s
  std::vector<double> eta_up;     // eta^l = X^l - (y alpha / 2E) y^l
  double y_alpha = 0;
  double xsq = 0;  // X^l alpha_l
  double eta = 0;  // eta^l alpha_l

  bool theta_valid = false; // false on the excluded ray (eta ~ 0)
  double theta = 0;

  std::vector<double> b_d2; // [l][i][j] B^l_ij
  std::vector<double> b_d3; // [l][i][j][k] B^l_ijk

  double estar = 0;
  double estar_quadratic_residual = 0; // max |third y-derivative of E*|
  std::vector<double> gstar;           // y-Hessian of E*
  bool gstar_pd = false;
  std::vector<double> gstar_inv; // empty unless gstar_pd
  std::vector<double> xstar;     // X*^l = g*^{lj} alpha_j, empty unless gstar_pd
  double b2 = 0;                 // g*^{ij} alpha_i alpha_j, NaN unless gstar_pd

  double scale = 1.0; // (1 + F^2)(1 + max |alpha_i|), residual normalizer base
};

// Throws errc::regularity_violation when d_x alpha = 0 at the point.
ConformalPack build_conformal_pack(const MetricSpec& spec, const PolyScalar& alpha,
                                   const ChartPoint& p, const DegreeCaps& caps = {0, 1, 5});

// Tensor pack of e^{alpha} F at the same point.
TensorPack wrapped_pack(const MetricSpec& spec, const PolyScalar& alpha, const ChartPoint& p,
                        const DegreeCaps& caps = {0, 1, 5});

// Structural invariants of the gradient field: reconstruction g_lm X^l = alpha_m, the
// symmetry and cross-lifting laws, the Cartan contraction of X^s X^l_s, tangentiality of
// eta and xi to the indicatrix, and nonnegativity of eta.
struct GradientFieldReport {
  double reconstruction = 0;
  double symmetry = 0;
  double cross_lifting = 0;
  double self_contraction = 0;
  double tangentiality = 0;
  double eta_min = 0;
  double scale = 1;
};
GradientFieldReport check_gradient_field(const ConformalPack& c);

// Max-norm disagreement between the jet route (derivatives of the spray difference) and the
// pack-subtraction route for B^l_ij and B^l_ijk, plus the explicit second-derivative
// assembly of the difference formula.
struct DualRouteReport {
  double b2_routes = 0;
  double b3_routes = 0;
  double b2_formula = 0;
  double scale = 1;
};
DualRouteReport b_dual_route(const ConformalPack& c, const TensorPack& wrapped);

// Landsberg transformation law: the wrapped metric's Landsberg tensor against the
// assembly from unwrapped objects. Returns (max residual, scale).
struct TransformationReport {
  double residual = 0;
  double scale = 1;
};
TransformationReport landsberg_transformation(const ConformalPack& c, const TensorPack& wrapped);

// Contracted invariance data at one point: ||B^l_ijk alpha_l||, ||(P~ - P)^l_ij alpha_l||,
// and the uncontracted ||B^l_ijk|| for the full-invariance control.
struct InvarianceSample {
  double mixed_contracted = 0;
  double landsberg_contracted = 0;
  double mixed_full = 0;
  double scale = 1;           // for the difference-tensor residuals ((-1)-homogeneous in y)
  double landsberg_scale = 1; // for the Landsberg-level residual (0-homogeneous)
};
InvarianceSample contracted_invariance_sample(const ConformalPack& c, const TensorPack& wrapped);

// Consequence identities for X^l_ij under the invariance hypothesis, each side assembled
// independently (left: jet second derivatives; right: pack contractions).
struct ConsequenceReport {
  double alpha_contracted = 0; // E X^l_ij alpha_l identity
  double x_contracted = 0;     // E X^j X^l_ij identity
  double scale = 1;
};
ConsequenceReport invariance_consequences(const ConformalPack& c);

// Both sides of the cubic-contraction identity (per free index) and its scalar corollary
// with the explicit Gram determinant.
struct CubicContractionReport {
  double residual = 0;    // max_i |lhs_i - rhs_i|
  double lhs_norm = 0;
  double rhs_norm = 0;
  double scalar_lhs = 0;  // xi-contracted form
  double scalar_rhs = 0;
  double scale = 1;
};
CubicContractionReport cubic_contraction_identity(const ConformalPack& c);

struct GramReport {
  double gram1 = 0;       // pair {eta, xi}
  double gram1_scale = 1; // Hadamard bound of the pair
  double gram2 = 0;       // triple {X, X*, Liouville}
  double gram2_scale = 1;
  bool xstar_available = false;
};
GramReport gram_tests(const ConformalPack& c);

// theta, the proportionality of xi to eta, the derivative law for X^l_j alpha_l, the
// four-term reconstruction of g* from {g, dE dE, da da, sym}, and the two coefficient
// identities tying those coefficients together.
struct ThetaReport {
  double theta = 0;
  double proportionality = 0;  // max_l |xi^l - theta eta^l|
  double gradient_law = 0;     // max_j |X^l_j alpha_l - theta (alpha_j - ...)|
  double reconstruction = 0;   // max_ij |g*_ij - (A g + P dEdE + R aa + Q sym)_ij|
  double coeff_identity_1 = 0; // 2EP + (y alpha) Q
  double coeff_identity_2 = 0; // 2EQ + R (y alpha) - E theta
  double scale = 1;
};
ThetaReport theta_and_gstar_decomposition(const ConformalPack& c);

// Constancy of X^l alpha_l and F X^s X^l_s alpha_l over unit directions in ker(d alpha),
// plus the line-profile constant K extracted per direction (and its alternate route).
struct SubspaceConstancyReport {
  size_t directions = 0;
  size_t skipped = 0;
  double xsq_mean = 0, xsq_spread = 0;
  double fxxa_mean = 0, fxxa_spread = 0;
  double k_mean = 0, k_spread = 0;
  double k_alt_max_diff = 0; // direct vs alternate extraction
};
SubspaceConstancyReport level_subspace_constancy(const MetricSpec& spec, const PolyScalar& alpha,
                                           const std::vector<double>& p, int ndirs,
                                           uint64_t seed);

// g* over a sample of directions at fixed x: entry deviation, quadraticity, b^2.
struct AssociatedRiemannianReport {
  std::vector<double> gstar;       // at the first admissible sample
  double entry_deviation = 0;      // max over samples of max entry difference
  double quadratic_residual = 0;   // max third y-derivative of E*
  double b2 = 0;
  bool pd = false;
  size_t samples = 0, skipped = 0;
};
AssociatedRiemannianReport associated_riemannian(const MetricSpec& spec, const PolyScalar& alpha,
                                                 const std::vector<double>& x, int nsamples,
                                                 uint64_t seed);

// Componentwise reconstruction of E X^l from the finsleroid data:
// E X^l = (1/2)(b^2 + q^2) b^l - (g q / 2) v^l, and its alpha-contraction against E*.
struct AxisReconstructionReport {
  double componentwise = 0;
  double contracted = 0;
  double scale = 1;
};
AxisReconstructionReport finsleroid_gradient_reconstruction(const ConformalPack& c,
                                                            const MetricSpec& spec);

// Admissible-point sampler shared by the verification suites: x in a small box, y in a
// shell, axis cone excluded. Deterministic in (seed, index).
ChartPoint sample_admissible_point(const MetricSpec& spec, uint64_t seed, uint64_t index,
                                   double x_box = 0.3);

// The conformal pair a suite uses for a spec: a conformal spec supplies (inner, alpha);
// a finsleroid spec pairs with the linear form of its axis at x = 0; a riemannian spec
// pairs with x^1.
PolyScalar default_alpha(const MetricSpec& spec);
const MetricSpec& suite_base_metric(const MetricSpec& spec);

} // namespace finsler
