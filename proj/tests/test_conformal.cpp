#include "doctest.h"

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/geom/conformal.hpp"
#include "finsler/geom/linalg.hpp"
#include "finsler/rng.hpp"

using namespace finsler;

namespace {

std::string specs_dir() { return std::string(FINSLER_SOURCE_DIR) + "/specs/"; }

MetricSpec load(const char* name) { return MetricSpec::from_file(specs_dir() + name); }

PolyScalar x1(int n = 3) { return PolyScalar::coordinate(n, 0); }

} // namespace

TEST_CASE("gradient field invariants hold on every family") {
  struct Pair {
    const char* spec;
    PolyScalar alpha;
  };
  const std::vector<Pair> pairs = {
      {"riemannian_curved.json", x1() + PolyScalar::coordinate(3, 1) * 0.4},
      {"finsleroid_matched.json", x1()},
      {"finsleroid_const.json", PolyScalar::coordinate(3, 1)}, // mismatched on purpose
  };
  for (const auto& pr : pairs) {
    CAPTURE(pr.spec);
    MetricSpec s = load(pr.spec);
    for (uint64_t i = 0; i < 8; ++i) {
      ConformalPack c = build_conformal_pack(s, pr.alpha, sample_admissible_point(s, 510 + i, i));
      GradientFieldReport r = check_gradient_field(c);
      CHECK(r.reconstruction <= 1e-12 * r.scale);
      CHECK(r.symmetry <= 1e-10 * r.scale);
      CHECK(r.cross_lifting <= 1e-10 * r.scale);
      CHECK(r.self_contraction <= 1e-10 * r.scale);
      CHECK(r.tangentiality <= 1e-10 * r.scale);
      CHECK(r.eta_min >= -1e-12);
    }
  }
}

TEST_CASE("euclidean metric with alpha = x^1 gives a constant gradient field") {
  MetricSpec s = load("euclidean3.json");
  ChartPoint p{{0.1, 0.2, -0.1}, {0.6, -0.8, 0.5}};
  ConformalPack c = build_conformal_pack(s, x1(), p);
  CHECK(c.x_up[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(c.x_up[1]) <= 1e-14);
  CHECK(std::abs(c.x_up[2]) <= 1e-14);
  for (double v : c.x_d1) CHECK(std::abs(v) <= 1e-14);
  const double yy = 0.36 + 0.64 + 0.25;
  for (int l = 0; l < 3; ++l) {
    const double want = (l == 0 ? 1.0 : 0.0) - 0.6 / yy * p.y[(size_t)l];
    CHECK(c.eta_up[(size_t)l] == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("a constant scale function violates the regularity hypothesis") {
  MetricSpec s = load("euclidean3.json");
  CHECK_THROWS_AS(
      (void)build_conformal_pack(s, PolyScalar::constant(3, 0.7), {{0, 0, 0}, {1, 0, 0.5}}),
      error);
}

TEST_CASE("spray difference routes agree: jets, pack subtraction, explicit formula") {
  for (const char* name : {"riemannian_curved.json", "finsleroid_matched.json"}) {
    CAPTURE(name);
    MetricSpec s = load(name);
    PolyScalar alpha = x1() + PolyScalar::coordinate(3, 2) * 0.3;
    for (uint64_t i = 0; i < 5; ++i) {
      ChartPoint p = sample_admissible_point(s, 600 + i, i);
      ConformalPack c = build_conformal_pack(s, alpha, p);
      TensorPack w = wrapped_pack(s, alpha, p);
      DualRouteReport r = b_dual_route(c, w);
      CHECK(r.b2_routes <= 1e-8 * r.scale);
      CHECK(r.b3_routes <= 1e-8 * r.scale);
      CHECK(r.b2_formula <= 1e-9 * r.scale);
    }
  }
}

TEST_CASE("landsberg transformation law") {
  // homothety limit, no conformal pack needed: constant alpha leaves the landsberg tensor
  MetricSpec fin = load("finsleroid_matched.json");
  ChartPoint p0 = sample_admissible_point(fin, 611, 0);
  TensorPack base = evaluate_pack(fin, p0);
  TensorPack hom = evaluate_pack(conformal_wrap(fin, PolyScalar::constant(3, 0.4)), p0);
  double dmax = 0;
  for (size_t k = 0; k < base.landsberg.size(); ++k)
    dmax = std::max(dmax, std::abs(base.landsberg[k] - hom.landsberg[k]));
  CHECK(dmax <= 1e-12 * (1.0 + 2.0 * base.E));

  struct Pair {
    const char* spec;
    PolyScalar alpha;
    double tol;
  };
  const std::vector<Pair> pairs = {
      {"riemannian_curved.json", x1(), 1e-9},
      {"finsleroid_matched.json", x1() + PolyScalar::coordinate(3, 1) * 0.5, 1e-8},
  };
  for (const auto& pr : pairs) {
    CAPTURE(pr.spec);
    MetricSpec s = load(pr.spec);
    for (uint64_t i = 0; i < 5; ++i) {
      ChartPoint p = sample_admissible_point(s, 620 + i, i);
      ConformalPack c = build_conformal_pack(s, pr.alpha, p);
      TensorPack w = wrapped_pack(s, pr.alpha, p);
      TransformationReport r = landsberg_transformation(c, w);
      CHECK(r.residual <= pr.tol * r.scale);
    }
  }
}

TEST_CASE("contracted invariance: matched axis passes, mismatched axis fails, riemannian trivial") {
  MetricSpec matched = load("finsleroid_matched.json");
  PolyScalar axis_alpha = default_alpha(matched);
  for (uint64_t i = 0; i < 10; ++i) {
    ChartPoint p = sample_admissible_point(matched, 700 + i, i);
    ConformalPack c = build_conformal_pack(matched, axis_alpha, p);
    TensorPack w = wrapped_pack(matched, axis_alpha, p);
    InvarianceSample s = contracted_invariance_sample(c, w);
    CHECK(s.mixed_contracted <= 1e-8 * s.scale);
    CHECK(s.landsberg_contracted <= 1e-8 * s.scale);
    CHECK(s.mixed_full > 1e-3 * s.scale); // full invariance genuinely fails at g != 0
  }

  MetricSpec riem = load("riemannian_curved.json");
  for (uint64_t i = 0; i < 5; ++i) {
    ChartPoint p = sample_admissible_point(riem, 720 + i, i);
    ConformalPack c = build_conformal_pack(riem, x1() + PolyScalar::coordinate(3, 1), p);
    double b3max = 0;
    for (double v : c.b_d3) b3max = std::max(b3max, std::abs(v));
    CHECK(b3max <= 1e-12 * c.scale);
  }

  MetricSpec mismatched = load("finsleroid_const.json"); // axis e1
  PolyScalar wrong = PolyScalar::coordinate(3, 1);       // alpha = x^2
  double best = 0;
  for (uint64_t i = 0; i < 10; ++i) {
    ChartPoint p = sample_admissible_point(mismatched, 730 + i, i);
    ConformalPack c = build_conformal_pack(mismatched, wrong, p);
    TensorPack w = wrapped_pack(mismatched, wrong, p);
    InvarianceSample s = contracted_invariance_sample(c, w);
    best = std::max(best, s.mixed_contracted / s.scale);
  }
  // the violation is certified by exhibiting a point where the contraction is large
  CHECK(best > 1e-3);
}

TEST_CASE("invariance consequences on the hypothesis family") {
  MetricSpec matched = load("finsleroid_matched.json");
  PolyScalar alpha = default_alpha(matched);
  for (uint64_t i = 0; i < 8; ++i) {
    ConformalPack c =
        build_conformal_pack(matched, alpha, sample_admissible_point(matched, 800 + i, i));
    ConsequenceReport r = invariance_consequences(c);
    CHECK(r.alpha_contracted <= 1e-7 * r.scale);
    CHECK(r.x_contracted <= 1e-7 * r.scale);
  }
  // riemannian: both sides vanish termwise
  MetricSpec riem = load("euclidean3.json");
  ConformalPack cr = build_conformal_pack(riem, x1(), {{0, 0, 0}, {0.3, 1.0, -0.2}});
  ConsequenceReport rr = invariance_consequences(cr);
  CHECK(rr.alpha_contracted <= 1e-13);
  CHECK(rr.x_contracted <= 1e-13);
}

TEST_CASE("cubic contraction identity and gram determinants") {
  MetricSpec matched = load("finsleroid_matched.json");
  PolyScalar alpha = default_alpha(matched);
  for (uint64_t i = 0; i < 8; ++i) {
    ConformalPack c =
        build_conformal_pack(matched, alpha, sample_admissible_point(matched, 900 + i, i));
    CubicContractionReport r = cubic_contraction_identity(c);
    // under the hypothesis both sides vanish individually
    CHECK(r.lhs_norm <= 1e-7 * r.scale);
    CHECK(r.rhs_norm <= 1e-7 * r.scale);
    CHECK(r.residual <= 1e-7 * r.scale);
    CHECK(std::abs(r.scalar_lhs) <= 1e-7 * r.scale);
    CHECK(std::abs(r.scalar_rhs) <= 1e-7 * r.scale);

    GramReport g = gram_tests(c);
    CHECK(std::abs(g.gram1) <= 1e-8 * g.gram1_scale);
    CHECK(g.xstar_available);
    CHECK(std::abs(g.gram2) <= 1e-8 * g.gram2_scale);
  }

  // riemannian: X* is proportional to X, so the triple is degenerate to machine precision
  MetricSpec riem = load("riemannian_curved.json");
  ConformalPack cr =
      build_conformal_pack(riem, x1(), sample_admissible_point(riem, 910, 0));
  GramReport gr = gram_tests(cr);
  CHECK(std::abs(gr.gram2) <= 1e-12 * gr.gram2_scale);

  // mismatched pair: the projected pair is genuinely independent somewhere
  MetricSpec mism = load("finsleroid_const.json");
  double best = 0;
  for (uint64_t i = 0; i < 10; ++i) {
    ConformalPack c = build_conformal_pack(mism, PolyScalar::coordinate(3, 1),
                                           sample_admissible_point(mism, 920 + i, i));
    GramReport g = gram_tests(c);
    best = std::max(best, std::abs(g.gram1) / g.gram1_scale);
  }
  CHECK(best > 1e-4);
}

TEST_CASE("associated riemannian energy") {
  // constant-coefficient matched family: gstar recovers a entrywise and b^2 = 1
  MetricSpec fin = load("finsleroid_const.json");
  PolyScalar alpha = default_alpha(fin); // x^1, matching the axis
  AssociatedRiemannianReport r =
      associated_riemannian(fin, alpha, {0.05, -0.1, 0.2}, 20, 4242);
  REQUIRE(r.pd);
  const std::vector<double> a = fin.a_at({0.05, -0.1, 0.2});
  for (size_t k = 0; k < a.size(); ++k)
    CHECK(std::abs(r.gstar[k] - a[k]) <= 1e-9 * (1.0 + std::abs(a[k])));
  CHECK(r.entry_deviation <= 1e-9);
  CHECK(r.quadratic_residual <= 1e-9);
  CHECK(r.b2 == doctest::Approx(1.0).epsilon(1e-8));

  // riemannian: E* is exactly quadratic for any alpha
  MetricSpec riem = load("riemannian_curved.json");
  AssociatedRiemannianReport rr =
      associated_riemannian(riem, x1() + PolyScalar::coordinate(3, 2) * 0.7, {0.1, 0.0, -0.1},
                            10, 4243);
  CHECK(rr.quadratic_residual <= 1e-12);

  // mismatched axis: quadraticity fails somewhere
  AssociatedRiemannianReport rm =
      associated_riemannian(fin, PolyScalar::coordinate(3, 1), {0.0, 0.0, 0.0}, 20, 4244);
  CHECK(rm.quadratic_residual > 1e-3);
}

TEST_CASE("theta and the gstar reconstruction") {
  MetricSpec matched = load("finsleroid_matched.json");
  PolyScalar alpha = default_alpha(matched);
  for (uint64_t i = 0; i < 8; ++i) {
    ConformalPack c =
        build_conformal_pack(matched, alpha, sample_admissible_point(matched, 950 + i, i));
    ThetaReport r = theta_and_gstar_decomposition(c);
    CHECK(r.proportionality <= 1e-7 * r.scale);
    CHECK(r.gradient_law <= 1e-7 * r.scale);
    CHECK(r.reconstruction <= 1e-7 * r.scale);
    CHECK(r.coeff_identity_1 <= 1e-10 * r.scale);
    CHECK(r.coeff_identity_2 <= 1e-10 * r.scale);
  }

  // riemannian: theta = 0 and the reconstruction collapses to (X^l alpha_l) g
  MetricSpec riem = load("riemannian_curved.json");
  ConformalPack cr = build_conformal_pack(riem, x1(), sample_admissible_point(riem, 960, 3));
  ThetaReport tr = theta_and_gstar_decomposition(cr);
  CHECK(std::abs(tr.theta) <= 1e-12);
  CHECK(tr.reconstruction <= 1e-12 * tr.scale);

  // excluded ray: y = X*(p) makes the projected field vanish (b^2 = 1)
  const std::vector<double> p0 = {0.1, -0.05, 0.2};
  AssociatedRiemannianReport assoc = associated_riemannian(riem, x1(), p0, 8, 99);
  std::vector<double> ginv = linalg::spd_inverse(assoc.gstar, 3, "gstar");
  std::vector<double> xstar(3, 0.0);
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < 3; ++j) xstar[(size_t)l] += ginv[(size_t)l * 3 + j] * (j == 0 ? 1.0 : 0.0);
  ConformalPack on_ray = build_conformal_pack(riem, x1(), {p0, xstar});
  CHECK_FALSE(on_ray.theta_valid);
  CHECK_THROWS_AS((void)theta_and_gstar_decomposition(on_ray), error);
}

TEST_CASE("subspace constancy and the line-profile constant") {
  MetricSpec matched = load("finsleroid_matched.json");
  PolyScalar alpha = default_alpha(matched);
  const std::vector<double> p = {0.12, -0.2, 0.08};
  SubspaceConstancyReport r = level_subspace_constancy(matched, alpha, p, 40, 7);
  REQUIRE(r.directions >= 30);
  CHECK(r.xsq_spread <= 1e-8 * std::abs(r.xsq_mean));
  CHECK(r.fxxa_spread <= 1e-8 * std::abs(r.fxxa_mean));
  CHECK(r.k_spread <= 1e-8 * std::abs(r.k_mean));
  const double g_at_p = matched.charge_at(p);
  CHECK(std::abs(r.k_mean - 2.0 * g_at_p) <= 1e-7);
  CHECK(r.k_alt_max_diff <= 1e-8 * (1.0 + std::abs(r.k_mean)));

  // riemannian control: the second quantity is identically zero
  MetricSpec riem = load("riemannian_curved.json");
  SubspaceConstancyReport rr = level_subspace_constancy(riem, x1(), {0.1, 0.1, -0.1}, 20, 8);
  CHECK(std::abs(rr.fxxa_mean) <= 1e-12);
  CHECK(rr.xsq_spread <= 1e-8 * std::abs(rr.xsq_mean));

  CHECK_THROWS_AS((void)level_subspace_constancy(
                      MetricSpec::parse(R"({"dimension":2,"family":"riemannian",
      "a":[[{"terms":[{"powers":[0,0],"coeff":1}]},{"terms":[]}],
           [{"terms":[]},{"terms":[{"powers":[0,0],"coeff":1}]}]]})"),
                      PolyScalar::coordinate(2, 0), {0.0, 0.0}, 10, 1),
                  error);
}

TEST_CASE("finsleroid gradient reconstruction from axis data") {
  MetricSpec matched = load("finsleroid_matched.json");
  PolyScalar alpha = default_alpha(matched);
  for (uint64_t i = 0; i < 8; ++i) {
    ChartPoint p = sample_admissible_point(matched, 990 + i, i);
    ConformalPack c = build_conformal_pack(matched, alpha, p);
    AxisReconstructionReport r = finsleroid_gradient_reconstruction(c, matched);
    CHECK(r.componentwise <= 1e-8 * r.scale);
    CHECK(r.contracted <= 1e-9 * r.scale);
    // the associated energy equals half the riemannian norm square of y
    const std::vector<double> a = matched.a_at(p.x);
    const double ayy = linalg::quadratic_form(a, p.y, p.y, 3);
    CHECK(std::abs(c.estar - 0.5 * ayy) <= 1e-9 * (1.0 + ayy));
  }
}
