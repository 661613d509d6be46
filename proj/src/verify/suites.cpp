#include "finsler/verify/suites.hpp"

#include <chrono>
#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/geom/linalg.hpp"
#include "finsler/rng.hpp"
#include "finsler/verify/oracle.hpp"

namespace finsler {

namespace {

size_t i2(int n, int i, int j) { return (size_t)i * n + j; }

// Accumulates the max of per-point relative residuals for one named check.
struct Acc {
  double worst = 0;
  size_t samples = 0, skipped = 0;
  void feed(double residual, double scale) {
    worst = std::max(worst, residual / std::max(scale, 1e-12));
    ++samples;
  }
  void feed_abs(double residual) {
    worst = std::max(worst, residual);
    ++samples;
  }
};

struct Checker {
  CheckReport rep;
  double tol_scale = 1.0;

  void add(const std::string& name, const std::string& anchor, const Acc& acc, double tol) {
    CheckRecord c;
    c.name = name;
    c.anchor = anchor;
    c.samples = acc.samples;
    c.skipped = acc.skipped;
    c.max_residual = acc.worst;
    c.tolerance = tol * tol_scale;
    c.status = acc.worst <= c.tolerance ? "pass" : "fail";
    rep.checks.push_back(std::move(c));
  }

  void add_hypothesis_gap(const std::string& name, const std::string& anchor, const Acc& acc,
                          double tol) {
    CheckRecord c;
    c.name = name;
    c.anchor = anchor;
    c.samples = acc.samples;
    c.skipped = acc.skipped;
    c.max_residual = acc.worst;
    c.tolerance = tol * tol_scale;
    c.status = "hypothesis-not-established";
    rep.checks.push_back(std::move(c));
  }

  void add_not_established(const std::string& name, const std::string& anchor) {
    CheckRecord c;
    c.name = name;
    c.anchor = anchor;
    c.status = "hypothesis-not-established";
    rep.checks.push_back(std::move(c));
  }
};

double vec_max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// base point for the single-point machinery (associated metric, subspace constancy):
// the origin when admissible for x, else the first sampled x
std::vector<double> base_x(const MetricSpec& spec, uint64_t seed) {
  std::vector<double> zero((size_t)spec.dim, 0.0);
  try {
    (void)spec.a_at(zero);
    if (spec.base().family == MetricFamily::finsleroid) (void)spec.charge_at(zero);
    return zero;
  } catch (const error&) {
    return sample_admissible_point(spec, seed, 0).x;
  }
}

void identities_suite(const MetricSpec& spec, const SuiteOptions& opt, Checker& ck) {
  const int n = spec.dim;
  Acc euler2, grad_len, cartan_sym, cartan_y, spray_h, berwald_h, mixed_y, inv_deriv, commut,
      antisym, lans_dual, lans_contr, indicatrix, oracle_g, oracle_chain;

  std::vector<double> curvature_samples;
  const bool riemannian_family = spec.base().family == MetricFamily::riemannian;

  for (int s = 0; s < opt.samples; ++s) {
    ChartPoint p = sample_admissible_point(spec, opt.seed, (uint64_t)s);
    TensorPack pk = evaluate_pack(spec, p);
    const double fscale = 1.0 + pk.F * pk.F;

    double yl = 0, yyg = 0;
    for (int i = 0; i < n; ++i) {
      yl += p.y[(size_t)i] * pk.l[(size_t)i];
      for (int j = 0; j < n; ++j) yyg += p.y[(size_t)i] * p.y[(size_t)j] * pk.at2(pk.g, i, j);
    }
    grad_len.feed(std::abs(yl - pk.F), pk.F);
    euler2.feed(std::abs(yyg - 2 * pk.E), pk.E);

    const double cn = vec_max_abs(pk.cartan);
    double sym = 0, yc = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double ycij = 0;
        for (int k = 0; k < n; ++k) {
          ycij += p.y[(size_t)k] * pk.at3(pk.cartan, i, j, k);
          sym = std::max({sym,
                          std::abs(pk.at3(pk.cartan, i, j, k) - pk.at3(pk.cartan, j, i, k)),
                          std::abs(pk.at3(pk.cartan, i, j, k) - pk.at3(pk.cartan, k, j, i))});
        }
        yc = std::max(yc, std::abs(ycij));
      }
    cartan_sym.feed(sym, 1.0 + cn);
    cartan_y.feed(yc, 1.0 + cn);

    double sh = 0, bh = 0, my = 0;
    const double pn = vec_max_abs(pk.berwald_mixed);
    for (int l = 0; l < n; ++l) {
      double ygi = 0;
      for (int i = 0; i < n; ++i) ygi += p.y[(size_t)i] * pk.at2(pk.spray_d1, l, i);
      sh = std::max(sh, std::abs(ygi - 2 * pk.spray[(size_t)l]));
      for (int i = 0; i < n; ++i) {
        double ygij = 0;
        for (int j = 0; j < n; ++j) ygij += p.y[(size_t)j] * pk.at3(pk.spray_d2, l, i, j);
        bh = std::max(bh, std::abs(ygij - pk.at2(pk.spray_d1, l, i)));
        for (int j = 0; j < n; ++j) {
          double yp = 0;
          for (int k = 0; k < n; ++k)
            yp += p.y[(size_t)k] * pk.at4(pk.berwald_mixed, l, i, j, k);
          my = std::max(my, std::abs(yp));
        }
      }
    }
    const double spray_scale = 1.0 + vec_max_abs(pk.spray);
    spray_h.feed(sh, spray_scale);
    berwald_h.feed(bh, spray_scale);
    mixed_y.feed(my, 1.0 + pn);

    CartanIdentityReport ci = check_cartan_identities(pk);
    inv_deriv.feed(ci.inverse_derivative_residual, 1.0 + ci.inverse_derivative_scale);
    commut.feed(ci.curvature_commutator_residual, 1.0 + ci.curvature_commutator_scale);
    antisym.feed(ci.lowered_antisymmetry_residual, 1.0 + ci.lowered_antisymmetry_scale);

    double ld = 0;
    for (size_t k = 0; k < pk.landsberg.size(); ++k)
      ld = std::max(ld, std::abs(pk.landsberg[k] - pk.landsberg_hder[k]));
    lans_dual.feed(ld, 1.0 + vec_max_abs(pk.landsberg));

    ContractionIdentityReport e4 = check_landsberg_contraction(pk);
    lans_contr.feed(e4.residual, fscale * (1.0 + e4.scale));

    // riemannian indicatrix: unit curvature through a deterministic plane per point
    if (riemannian_family) {
      std::vector<double> u((size_t)n), w((size_t)n);
      for (int i = 0; i < n; ++i) {
        u[(size_t)i] = uniform(opt.seed ^ 0xabc, (uint64_t)s * 8 + (uint64_t)i, -1, 1);
        w[(size_t)i] = uniform(opt.seed ^ 0xdef, (uint64_t)s * 8 + (uint64_t)i, -1, 1);
      }
      try {
        indicatrix.feed_abs(std::abs(indicatrix_sectional_curvature(pk, u, w) - 1.0));
      } catch (const error&) {
        ++indicatrix.skipped;
      }
    }
  }

  // non-riemannian: constancy holds per indicatrix, so fix the base point and vary only
  // the direction and the plane
  if (!riemannian_family) {
    const std::vector<double> x0 = base_x(spec, opt.seed ^ 0x1d1c);
    for (int s = 0; s < opt.samples; ++s) {
      ChartPoint p = sample_admissible_point(spec, opt.seed ^ 0x1d1d, (uint64_t)s);
      p.x = x0;
      if (!is_admissible(spec, p)) {
        ++indicatrix.skipped;
        continue;
      }
      TensorPack pk = evaluate_pack(spec, p);
      std::vector<double> u((size_t)n), w((size_t)n);
      for (int i = 0; i < n; ++i) {
        u[(size_t)i] = uniform(opt.seed ^ 0xabc, (uint64_t)s * 8 + (uint64_t)i, -1, 1);
        w[(size_t)i] = uniform(opt.seed ^ 0xdef, (uint64_t)s * 8 + (uint64_t)i, -1, 1);
      }
      try {
        curvature_samples.push_back(indicatrix_sectional_curvature(pk, u, w));
      } catch (const error&) {
        ++indicatrix.skipped;
      }
    }
  }

  // finsleroid: constancy of the curvature across all (point, plane) samples
  if (!riemannian_family && !curvature_samples.empty()) {
    double mean = 0;
    for (double k : curvature_samples) mean += k;
    mean /= (double)curvature_samples.size();
    double var = 0;
    for (double k : curvature_samples) var += (k - mean) * (k - mean);
    const double sd = std::sqrt(var / (double)curvature_samples.size());
    indicatrix.samples = curvature_samples.size();
    indicatrix.worst = mean > 0 ? sd / mean : std::numeric_limits<double>::infinity();
  }

  // jet output against the finite-difference oracle: fundamental tensor directly from the
  // scalar energy, then one derivative layer over the jet-computed chain
  const int oracle_points = std::min(3, std::max(1, opt.samples / 32));
  for (int s = 0; s < oracle_points; ++s) {
    ChartPoint p = sample_admissible_point(spec, opt.seed ^ 0x0c1e, (uint64_t)s);
    TensorPack pk = evaluate_pack(spec, p);
    oracle::ScalarField e_scalar = [&](const std::vector<double>& x,
                                       const std::vector<double>& y) {
      return energy_value(spec, {x, y});
    };
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        std::vector<int> mi((size_t)(2 * n), 0);
        mi[(size_t)(n + i)] += 1;
        mi[(size_t)(n + j)] += 1;
        auto fd = oracle::fd_partial(e_scalar, p.x, p.y, mi);
        oracle_g.feed(std::abs(pk.at2(pk.g, i, j) - fd.value), 1.0 + std::abs(fd.value));
      }
    oracle::VectorField chain = [&](const std::vector<double>& x, const std::vector<double>& y) {
      TensorPack q = evaluate_pack(spec, {x, y});
      std::vector<double> out;
      out.insert(out.end(), q.g.begin(), q.g.end());
      out.insert(out.end(), q.spray.begin(), q.spray.end());
      out.insert(out.end(), q.spray_d1.begin(), q.spray_d1.end());
      out.insert(out.end(), q.spray_d2.begin(), q.spray_d2.end());
      return out;
    };
    for (int k = 0; k < n; ++k) {
      auto d = oracle::fd_derivative_vec(chain, p.x, p.y, n + k);
      size_t off = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          oracle_chain.feed(std::abs(2.0 * pk.at3(pk.cartan, i, j, k) - d[off + i2(n, i, j)]),
                            1.0 + std::abs(d[off + i2(n, i, j)]));
      off += (size_t)n * n;
      for (int l = 0; l < n; ++l)
        oracle_chain.feed(std::abs(pk.at2(pk.spray_d1, l, k) - d[off + (size_t)l]),
                          1.0 + std::abs(d[off + (size_t)l]));
      off += (size_t)n;
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          oracle_chain.feed(std::abs(pk.at3(pk.spray_d2, l, i, k) - d[off + i2(n, l, i)]),
                            1.0 + std::abs(d[off + i2(n, l, i)]));
      off += (size_t)n * n;
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            oracle_chain.feed(
                std::abs(pk.at4(pk.spray_d3, l, i, j, k) - d[off + ((size_t)l * n + i) * n + j]),
                1.0 + std::abs(d[off + ((size_t)l * n + i) * n + j]));
    }
  }

  ck.add("length-gradient-contraction", "euler-degree-1", grad_len, 1e-10);
  ck.add("energy-hessian-contraction", "euler-degree-2", euler2, 1e-10);
  ck.add("cartan-total-symmetry", "cartan-symmetry", cartan_sym, 1e-12);
  ck.add("cartan-liouville-contraction", "cartan-y-contraction", cartan_y, 1e-10);
  ck.add("spray-homogeneity", "spray-degree-2", spray_h, 1e-10);
  ck.add("connection-homogeneity", "berwald-connection-degree-1", berwald_h, 1e-10);
  ck.add("mixed-curvature-liouville", "mixed-curvature-y-contraction", mixed_y, 1e-10);
  ck.add("inverse-metric-derivative", "inverse-metric-derivative", inv_deriv, 1e-9);
  ck.add("curvature-commutator", "vv-curvature-commutator", commut, 1e-9);
  ck.add("lowered-curvature-antisymmetry", "vv-curvature-antisymmetry", antisym, 1e-10);
  ck.add("landsberg-dual-assembly", "landsberg-two-expressions", lans_dual, 1e-10);
  ck.add("landsberg-mixed-contraction", "landsberg-from-mixed-curvature", lans_contr, 1e-8);
  if (riemannian_family)
    ck.add("indicatrix-curvature-unit", "indicatrix-riemannian-unit", indicatrix, 1e-9);
  else
    ck.add("indicatrix-curvature-constancy", "indicatrix-constancy", indicatrix, 1e-6);
  ck.add("jet-oracle-fundamental", "fd-oracle-fundamental", oracle_g, 1e-6);
  ck.add("jet-oracle-derivative-chain", "fd-oracle-chain", oracle_chain, 1e-6);
}

void conformal_suite(const MetricSpec& spec, const SuiteOptions& opt, Checker& ck) {
  const MetricSpec& base = suite_base_metric(spec);
  const PolyScalar alpha = suite_alpha(spec, opt);
  const int n = base.dim;

  Acc recon, sym, lift, selfc, tang, eta_nn, gscale, cinv, dual2, dual3, formula, transf;
  for (int s = 0; s < opt.samples; ++s) {
    ChartPoint p = sample_admissible_point(base, opt.seed + 1, (uint64_t)s);
    ConformalPack c = build_conformal_pack(base, alpha, p);
    TensorPack w = wrapped_pack(base, alpha, p);

    GradientFieldReport gr = check_gradient_field(c);
    recon.feed(gr.reconstruction, gr.scale);
    sym.feed(gr.symmetry, gr.scale);
    lift.feed(gr.cross_lifting, gr.scale);
    selfc.feed(gr.self_contraction, gr.scale);
    tang.feed(gr.tangentiality, gr.scale);
    eta_nn.feed_abs(std::max(0.0, -gr.eta_min));

    // conformal scaling of the fundamental tensor and invariance of the raised cartan
    const double factor = std::exp(2.0 * c.alpha_value);
    double gs = 0, ci = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        gs = std::max(gs, std::abs(w.at2(w.g, i, j) - factor * c.pack.at2(c.pack.g, i, j)));
        for (int k = 0; k < n; ++k)
          ci = std::max(ci, std::abs(w.at3(w.cartan_up, i, j, k) -
                                     c.pack.at3(c.pack.cartan_up, i, j, k)));
      }
    gscale.feed(gs, (1.0 + factor) * (1.0 + vec_max_abs(c.pack.g)));
    cinv.feed(ci, 1.0 + vec_max_abs(c.pack.cartan_up));

    DualRouteReport dr = b_dual_route(c, w);
    dual2.feed(dr.b2_routes, dr.scale);
    dual3.feed(dr.b3_routes, dr.scale);
    formula.feed(dr.b2_formula, dr.scale);

    TransformationReport tr = landsberg_transformation(c, w);
    transf.feed(tr.residual, tr.scale);
  }

  ck.add("gradient-reconstruction", "gradient-field-definition", recon, 1e-12);
  ck.add("gradient-derivative-symmetry", "lowered-derivative-symmetry", sym, 1e-10);
  ck.add("gradient-cross-lifting", "cross-lifting", lift, 1e-10);
  ck.add("gradient-self-contraction", "cartan-self-contraction", selfc, 1e-10);
  ck.add("projected-field-tangentiality", "indicatrix-tangentiality", tang, 1e-10);
  ck.add("projected-norm-nonnegative", "projected-norm-inequality", eta_nn, 1e-12);
  ck.add("conformal-metric-scaling", "conformal-fundamental-scaling", gscale, 1e-10);
  ck.add("cartan-conformal-invariance", "raised-cartan-invariance", cinv, 1e-10);
  ck.add("spray-difference-dual-route", "difference-tensor-two-routes", dual2, 1e-8);
  ck.add("mixed-difference-dual-route", "mixed-difference-two-routes", dual3, 1e-8);
  ck.add("spray-difference-formula", "difference-tensor-closed-form", formula, 1e-9);
  ck.add("landsberg-transformation", "landsberg-transformation", transf, 1e-8);
}

// Hypothesis gate shared by rigidity/compare: contracted mixed invariance on the sample.
bool hypothesis_established(const MetricSpec& base, const PolyScalar& alpha,
                            const SuiteOptions& opt, Acc& mixed, Acc& landsberg) {
  const int count = std::max(10, opt.samples / 2);
  double worst = 0;
  for (int s = 0; s < count; ++s) {
    ChartPoint p = sample_admissible_point(base, opt.seed + 2, (uint64_t)s);
    ConformalPack c = build_conformal_pack(base, alpha, p);
    TensorPack w = wrapped_pack(base, alpha, p);
    InvarianceSample smp = contracted_invariance_sample(c, w);
    mixed.feed(smp.mixed_contracted, smp.scale);
    landsberg.feed(smp.landsberg_contracted, smp.landsberg_scale);
    worst = std::max(worst, smp.mixed_contracted / smp.scale);
  }
  return worst <= 1e-6;
}

void rigidity_suite(const MetricSpec& spec, const SuiteOptions& opt, Checker& ck) {
  const MetricSpec& base = suite_base_metric(spec);
  if (base.dim < 3)
    fail(errc::dimension,
         "rigidity checks need dimension >= 3: in dimension 2 the initial conditions live on "
         "a one-dimensional subspace split by the origin and are not covered here");
  const PolyScalar alpha = suite_alpha(spec, opt);

  Acc mixed, lans;
  const bool hyp = hypothesis_established(base, alpha, opt, mixed, lans);
  if (!hyp) {
    ck.add_hypothesis_gap("contracted-mixed-invariance", "contracted-invariance", mixed, 1e-8);
    ck.add_hypothesis_gap("contracted-landsberg-invariance", "contracted-landsberg", lans, 1e-8);
    for (const char* name :
         {"consequence-alpha-contraction", "consequence-gradient-contraction",
          "cubic-contraction-left", "cubic-contraction-right", "cubic-contraction-match",
          "gram-projected-pair", "gram-gradient-triple", "associated-quadraticity",
          "gradient-norm-unit", "theta-proportionality", "theta-gradient-law",
          "gstar-reconstruction", "gstar-coefficient-identities", "subspace-constant-scale",
          "subspace-constant-slope", "line-constant-spread", "line-constant-charge"})
      ck.add_not_established(name, name);
    return;
  }
  ck.add("contracted-mixed-invariance", "contracted-invariance", mixed, 1e-8);
  ck.add("contracted-landsberg-invariance", "contracted-landsberg", lans, 1e-8);

  Acc cons_a, cons_x, cubic_l, cubic_r, cubic_m, gram1, gram2, theta_prop, theta_law, grecon,
      gcoeff;
  for (int s = 0; s < opt.samples; ++s) {
    ChartPoint p = sample_admissible_point(base, opt.seed + 3, (uint64_t)s);
    ConformalPack c = build_conformal_pack(base, alpha, p);

    ConsequenceReport cr = invariance_consequences(c);
    cons_a.feed(cr.alpha_contracted, cr.scale);
    cons_x.feed(cr.x_contracted, cr.scale);

    CubicContractionReport cu = cubic_contraction_identity(c);
    cubic_l.feed(cu.lhs_norm, cu.scale);
    cubic_r.feed(cu.rhs_norm, cu.scale);
    cubic_m.feed(cu.residual, cu.scale);

    GramReport g = gram_tests(c);
    gram1.feed(std::abs(g.gram1), g.gram1_scale);
    if (g.xstar_available)
      gram2.feed(std::abs(g.gram2), g.gram2_scale);
    else
      ++gram2.skipped;

    if (c.theta_valid) {
      ThetaReport t = theta_and_gstar_decomposition(c);
      theta_prop.feed(t.proportionality, t.scale);
      theta_law.feed(t.gradient_law, t.scale);
      grecon.feed(t.reconstruction, t.scale);
      gcoeff.feed(std::max(t.coeff_identity_1, t.coeff_identity_2), t.scale);
    } else {
      ++theta_prop.skipped;
    }
  }
  ck.add("consequence-alpha-contraction", "second-derivative-consequence-a", cons_a, 1e-7);
  ck.add("consequence-gradient-contraction", "second-derivative-consequence-x", cons_x, 1e-7);
  ck.add("cubic-contraction-left", "cubic-contraction-left", cubic_l, 1e-7);
  ck.add("cubic-contraction-right", "cubic-contraction-right", cubic_r, 1e-7);
  ck.add("cubic-contraction-match", "cubic-contraction-identity", cubic_m, 1e-7);
  ck.add("gram-projected-pair", "projected-pair-dependence", gram1, 1e-8);
  ck.add("gram-gradient-triple", "gradient-triple-dependence", gram2, 1e-8);

  const std::vector<double> p0 = base_x(base, opt.seed + 4);
  AssociatedRiemannianReport ar =
      associated_riemannian(base, alpha, p0, std::max(10, opt.samples / 4), opt.seed + 5);
  Acc quad, b2unit;
  quad.feed(ar.quadratic_residual, 1.0 + vec_max_abs(ar.gstar));
  quad.skipped = ar.skipped;
  if (ar.pd) b2unit.feed_abs(std::abs(ar.b2 - 1.0));
  ck.add("associated-quadraticity", "associated-energy-quadratic", quad, 1e-9);
  ck.add("gradient-norm-unit", "gradient-norm-square-one", b2unit, 1e-8);

  ck.add("theta-proportionality", "projected-proportionality", theta_prop, 1e-7);
  ck.add("theta-gradient-law", "gradient-derivative-law", theta_law, 1e-7);
  ck.add("gstar-reconstruction", "associated-metric-decomposition", grecon, 1e-7);
  ck.add("gstar-coefficient-identities", "decomposition-coefficients", gcoeff, 1e-10);

  SubspaceConstancyReport sc = level_subspace_constancy(base, alpha, p0, opt.directions, opt.seed + 6);
  Acc scale_c, slope_c, kspread, kcharge;
  scale_c.feed(sc.xsq_spread, std::abs(sc.xsq_mean));
  scale_c.samples = sc.directions;
  scale_c.skipped = sc.skipped;
  slope_c.feed(sc.fxxa_spread, std::max(1e-6, std::abs(sc.fxxa_mean)));
  slope_c.samples = sc.directions;
  kspread.feed(sc.k_spread, std::max(1e-6, std::abs(sc.k_mean)));
  kspread.samples = sc.directions;
  kcharge.feed_abs(std::abs(sc.k_mean - 2.0 * base.charge_at(p0)));
  ck.add("subspace-constant-scale", "level-subspace-scale-constant", scale_c, 1e-8);
  ck.add("subspace-constant-slope", "level-subspace-slope-constant", slope_c, 1e-8);
  ck.add("line-constant-spread", "line-constant-direction-free", kspread, 1e-8);
  ck.add("line-constant-charge", "line-constant-charge-correspondence", kcharge, 1e-7);
}

void riccati_suite(const MetricSpec& spec, const SuiteOptions& opt, Checker& ck) {
  Acc closed, rk, anchor, reject;
  for (int i = 0; i < 20; ++i) {
    const double K = uniform(opt.seed ^ 0x777, (uint64_t)i, -3.9, 3.9);
    const double f = uniform(opt.seed ^ 0x778, (uint64_t)i, 0.4, 2.5);
    const double estar = 0.5 * f * f;
    std::vector<RiccatiSample> s;
    for (int k = 0; k <= 200; ++k) {
      const double t = -10.0 + 0.1 * k;
      s.push_back({t, closed_form_z(K, f, estar, t), closed_form_z_prime(K, f, estar, t)});
    }
    closed.feed_abs(riccati_residual(s, f * f, 1.0));
    anchor.feed_abs(std::abs(closed_form_z(K, f, estar, 0.0) - K / f));
  }
  for (double K : {-3.9, -2.0, 0.0, 2.0, 3.9}) {
    auto traj = integrate_numerically(K, 1.0, -8.0, 8.0, 10000);
    rk.feed_abs(std::abs(traj.back().z - closed_form_z(K, 1.0, 0.5, 8.0)));
  }
  size_t accepted = 0;
  for (double K : {4.0, -4.0, 5.5}) {
    try {
      (void)closed_form_z(K, 1.0, 0.5, 0.0);
      ++accepted;
    } catch (const error&) {
    }
    try {
      (void)integrate_numerically(K, 1.0, 0.0, 1.0, 200);
      ++accepted;
    } catch (const error&) {
    }
  }
  reject.feed_abs((double)accepted);

  ck.add("closed-form-solution", "line-equation-closed-form", closed, 1e-10);
  ck.add("integrator-agreement", "closed-form-vs-integrator", rk, 1e-6);
  ck.add("initial-slope-anchor", "initial-slope", anchor, 1e-14);
  ck.add("inadmissible-constant-rejection", "line-constant-range", reject, 0.5);

  // metric-side line profile (conditional on the invariance hypothesis)
  const MetricSpec& base = suite_base_metric(spec);
  const PolyScalar alpha = suite_alpha(spec, opt);
  Acc mixed, lans;
  if (!hypothesis_established(base, alpha, opt, mixed, lans)) {
    for (const char* name : {"line-profile-constant", "line-profile-match", "line-logderivative"})
      ck.add_not_established(name, name);
    return;
  }
  const std::vector<double> p0 = base_x(base, opt.seed + 7);
  SubspaceConstancyReport sc = level_subspace_constancy(base, alpha, p0, 4, opt.seed + 8);
  (void)sc;
  // a unit direction in the level subspace
  AssociatedRiemannianReport ar = associated_riemannian(base, alpha, p0, 8, opt.seed + 9);
  std::vector<double> agrad((size_t)base.dim);
  for (int i = 0; i < base.dim; ++i) agrad[(size_t)i] = alpha.deriv(i).eval(p0);
  int m = 0;
  for (int i = 1; i < base.dim; ++i)
    if (std::abs(agrad[(size_t)i]) > std::abs(agrad[(size_t)m])) m = i;
  std::vector<double> v((size_t)base.dim, 0.0);
  const int k0 = m == 0 ? 1 : 0;
  v[(size_t)k0] = 1.0;
  v[(size_t)m] = -agrad[(size_t)k0] / agrad[(size_t)m];
  const double nrm = std::sqrt(linalg::quadratic_form(ar.gstar, v, v, base.dim));
  for (double& x : v) x /= nrm;

  LineProfileReport lp =
      extract_line_profile(base, alpha, p0, v, -5.0, 5.0, std::max(11, opt.grid));
  Acc kconst, prof, logd;
  kconst.feed_abs(std::abs(lp.k_measured - 2.0 * base.charge_at(p0)));
  prof.feed_abs(lp.profile_residual);
  prof.samples = lp.grid;
  prof.skipped = lp.skipped;
  logd.feed_abs(lp.logderiv_residual);
  ck.add("line-profile-constant", "line-constant-charge-correspondence", kconst, 1e-7);
  ck.add("line-profile-match", "energy-profile-closed-form", prof, 1e-8);
  ck.add("line-logderivative", "log-derivative-closed-form", logd, 1e-7);
}

void compare_suite(const MetricSpec& spec, const SuiteOptions& opt, Checker& ck) {
  const MetricSpec& base = suite_base_metric(spec);
  if (base.dim < 3)
    fail(errc::dimension,
         "the comparison suite needs dimension >= 3: in dimension 2 the initial conditions "
         "live on a one-dimensional subspace split by the origin and are not covered here");
  const PolyScalar alpha = suite_alpha(spec, opt);

  if (base.family != MetricFamily::finsleroid) {
    for (const char* name :
         {"profile-vs-family-energy", "line-quadratic-identity", "line-angular-identity",
          "angle-branch-agreement", "angle-axis-limit", "gradient-axis-reconstruction",
          "associated-energy-identity"})
      ck.add_not_established(name, name);
    return;
  }
  Acc mixed, lans;
  if (!hypothesis_established(base, alpha, opt, mixed, lans)) {
    for (const char* name :
         {"profile-vs-family-energy", "line-quadratic-identity", "line-angular-identity",
          "gradient-axis-reconstruction", "associated-energy-identity"})
      ck.add_not_established(name, name);
  } else {
    const std::vector<double> p0 = base_x(base, opt.seed + 10);
    AssociatedRiemannianReport ar = associated_riemannian(base, alpha, p0, 8, opt.seed + 11);
    std::vector<double> agrad((size_t)base.dim);
    for (int i = 0; i < base.dim; ++i) agrad[(size_t)i] = alpha.deriv(i).eval(p0);
    int m = 0;
    for (int i = 1; i < base.dim; ++i)
      if (std::abs(agrad[(size_t)i]) > std::abs(agrad[(size_t)m])) m = i;
    std::vector<double> v((size_t)base.dim, 0.0);
    const int k0 = m == 0 ? 1 : 0;
    v[(size_t)k0] = 1.0;
    v[(size_t)m] = -agrad[(size_t)k0] / agrad[(size_t)m];
    const double nrm = std::sqrt(linalg::quadratic_form(ar.gstar, v, v, base.dim));
    for (double& x : v) x /= nrm;

    ProfileFamilyReport t6 = compare_profile_with_family(base, alpha, p0, v, -5.0, 5.0, std::max(11, opt.grid));
    Acc energy, quad, ang;
    energy.feed_abs(t6.energy_residual);
    energy.samples = t6.grid;
    energy.skipped = t6.skipped;
    quad.feed_abs(t6.quadratic_identity);
    ang.feed_abs(t6.phi_identity);
    ck.add("profile-vs-family-energy", "profile-vs-family-energy", energy, 1e-8);
    ck.add("line-quadratic-identity", "line-quadratic-identity", quad, 1e-10);
    ck.add("line-angular-identity", "line-angular-identity", ang, 1e-10);

    Acc axis_rec, estar_id;
    for (int s = 0; s < std::max(10, opt.samples / 2); ++s) {
      ChartPoint p = sample_admissible_point(base, opt.seed + 12, (uint64_t)s);
      ConformalPack c = build_conformal_pack(base, alpha, p);
      AxisReconstructionReport rr = finsleroid_gradient_reconstruction(c, base);
      axis_rec.feed(rr.componentwise, rr.scale);
      estar_id.feed(rr.contracted, rr.scale);
    }
    ck.add("gradient-axis-reconstruction", "gradient-from-axis-data", axis_rec, 1e-8);
    ck.add("associated-energy-identity", "associated-energy-from-axis", estar_id, 1e-9);
  }

  // branch agreement needs no hypothesis, only the family
  Acc branch, limit;
  for (int s = 0; s < std::max(10, opt.samples / 2); ++s) {
    ChartPoint p = sample_admissible_point(base, opt.seed + 13, (uint64_t)s);
    PhiReport pr = phi_forms_agree(base, p);
    branch.feed_abs(pr.branch_residual);
    limit.feed_abs(pr.limit_error);
  }
  ck.add("angle-branch-agreement", "angle-piecewise-vs-arctan", branch, 1e-12);
  ck.add("angle-axis-limit", "angle-limit-at-axis", limit, 1e-8);
}

} // namespace

PolyScalar suite_alpha(const MetricSpec& spec, const SuiteOptions& opt) {
  if (opt.alpha_override) return *opt.alpha_override;
  return default_alpha(spec);
}

CheckReport run_suite(const std::string& suite, const MetricSpec& spec, const SuiteOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  Checker ck;
  ck.tol_scale = opt.tol_scale;
  ck.rep.suite = suite;
  ck.rep.seed = opt.seed;
  ck.rep.spec_digest = spec.digest();

  if (suite == "identities")
    identities_suite(spec, opt, ck);
  else if (suite == "conformal")
    conformal_suite(spec, opt, ck);
  else if (suite == "rigidity")
    rigidity_suite(spec, opt, ck);
  else if (suite == "riccati")
    riccati_suite(spec, opt, ck);
  else if (suite == "compare")
    compare_suite(spec, opt, ck);
  else if (suite == "all") {
    identities_suite(spec, opt, ck);
    conformal_suite(spec, opt, ck);
    rigidity_suite(spec, opt, ck);
    riccati_suite(spec, opt, ck);
    compare_suite(spec, opt, ck);
  } else {
    fail(errc::config, "unknown suite: " + suite +
                           " (expected identities, conformal, rigidity, riccati, compare, all)");
  }

  ck.rep.finalize();
  ck.rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return ck.rep;
}

} // namespace finsler
