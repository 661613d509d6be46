#pragma once

#include <vector>

#include "finsler/geom/energy.hpp"
#include "finsler/geom/metric_spec.hpp"

namespace finsler {

// Jet-valued intermediates retained for reuse (the conformal machinery differentiates the
// gradient field and the spray difference, which need these jets, not just values).
struct JetBundle {
  std::shared_ptr<const JetSpace> full;         // the working caps
  std::shared_ptr<const JetSpace> metric_space; // (x_cap, y_cap - 2), holds g and g_inv
  std::shared_ptr<const JetSpace> spray_space;  // (x_cap - 1, y_cap - 2)
  Jet energy;             // at full caps
  std::vector<Jet> g;     // n*n fundamental tensor
  std::vector<Jet> g_inv; // n*n inverse
  std::vector<Jet> spray; // n geodesic spray
};

// Every tensor object at one point of the slit tangent bundle, plus the jets they came
// from. All derivative placement conventions:
//   cartan C_ijk = (1/2) d g_ij / d y^k (the convention under which the inverse-metric
//     derivative identity and the conformal transformation formulas hold),
//   q_up[l][i][j][k] = Q^l_ijk = C^l_jm C^m_ik - C^l_im C^m_jk,
//   q_low[p][i][s][r] = g_rl Q^l_pis, the fully lowered curvature of the vertical metric
//     (Q^l_ijk is its Riemann tensor with Levi-Civita coefficients C^k_ij, so q_low carries
//     the usual curvature symmetries: antisymmetry in (p,i), in (s,r), pair exchange),
//   spray_d1[l][i] = G^l_i, spray_d2[l][i][j] = G^l_ij, spray_d3[l][i][j][k] = G^l_ijk,
//   berwald_mixed = -spray_d3,
//   landsberg[l][i][j] = P^l_ij.
struct TensorPack {
  int n = 0;
  ChartPoint point;
  double E = 0, F = 0;
  std::vector<double> l;            // n
  std::vector<double> dE_dy;        // n
  std::vector<double> g, g_inv;     // n*n
  std::vector<double> dg_dx;        // n^3 [j][m][i] = d g_jm / d x^i
  std::vector<double> cartan;       // n^3 [i][j][k]
  std::vector<double> cartan_up;    // n^3 [l][i][j] = C^l_ij
  std::vector<double> dcartan_up;   // n^4 [l][j][k][i] = d C^l_jk / d y^i
  std::vector<double> q_up;         // n^4
  std::vector<double> q_low;        // n^4
  std::vector<double> spray;        // n
  std::vector<double> spray_d1;     // n^2
  std::vector<double> spray_d2;     // n^3
  std::vector<double> spray_d3;     // n^4
  std::vector<double> berwald_mixed;  // n^4
  std::vector<double> landsberg;      // n^3, partial-x assembly (primary)
  std::vector<double> landsberg_hder; // n^3, horizontal-derivative assembly (cross-check)

  JetBundle jets;

  double at2(const std::vector<double>& t, int i, int j) const { return t[(size_t)i * n + j]; }
  double at3(const std::vector<double>& t, int i, int j, int k) const {
    return t[((size_t)i * n + j) * n + k];
  }
  double at4(const std::vector<double>& t, int i, int j, int k, int m) const {
    return t[(((size_t)i * n + j) * n + k) * n + m];
  }
};

// Evaluates the full pack. Requires caps.x_cap >= 1 and caps.y_cap >= 5; throws on
// inadmissible points and on convexity failures (naming the point).
TensorPack evaluate_pack(const MetricSpec& spec, const ChartPoint& p,
                         const DegreeCaps& caps = {0, 1, 5}); // dim 0: use the spec's

struct CartanIdentityReport {
  double inverse_derivative_residual = 0; // d g^{lm}/d y^i + 2 C_i^{lm}
  double inverse_derivative_scale = 0;
  double curvature_commutator_residual = 0; // d C^l_jk/d y^i - d C^l_ik/d y^j - 2 Q^l_ijk
  double curvature_commutator_scale = 0;
  double lowered_antisymmetry_residual = 0; // q_low[p][i][s][r] + q_low[i][p][s][r]
  double lowered_antisymmetry_scale = 0;
};

CartanIdentityReport check_cartan_identities(const TensorPack& pack);

// Residual of the Landsberg / mixed-curvature contraction identity
// P^l_ij + (F/2) l_m g^{kl} P^m_ijk = 0; returns (residual, scale).
struct ContractionIdentityReport {
  double residual = 0;
  double scale = 0;
};
ContractionIdentityReport check_landsberg_contraction(const TensorPack& pack);

// Sectional curvature of the indicatrix through the plane spanned by u, w after projecting
// both against the Liouville direction: K = 1 + Q(u,w,w,u)/Gram. Riemannian packs give 1.
double indicatrix_sectional_curvature(const TensorPack& pack, std::vector<double> u,
                                      std::vector<double> w);

} // namespace finsler
