#include "doctest.h"

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/geom/linalg.hpp"
#include "finsler/geom/tensor_pack.hpp"
#include "finsler/rng.hpp"
#include "finsler/verify/oracle.hpp"

using namespace finsler;

namespace {

std::string specs_dir() { return std::string(FINSLER_SOURCE_DIR) + "/specs/"; }

ChartPoint sample_point(const MetricSpec& spec, uint64_t seed, uint64_t index) {
  for (uint64_t attempt = 0;; ++attempt) {
    ChartPoint p;
    const uint64_t base = index * 64 + attempt * 8192;
    p.x.resize((size_t)spec.dim);
    p.y.resize((size_t)spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
      p.x[(size_t)i] = uniform(seed, base + (uint64_t)i, -0.3, 0.3);
      p.y[(size_t)i] = uniform(seed, base + 16 + (uint64_t)i, -1.5, 1.5);
    }
    if (is_admissible(spec, p)) return p;
  }
}

// Classical Christoffel symbols of a position metric, from exact polynomial derivatives.
// Independent oracle for the spray of a riemannian spec.
std::vector<double> christoffel_spray(const MetricSpec& spec, const ChartPoint& p) {
  const int n = spec.dim;
  const std::vector<double> a = spec.a_at(p.x);
  const std::vector<double> ainv = linalg::spd_inverse(a, n, "a not pd");
  std::vector<double> da((size_t)n * n * n); // [i][j][m] = d a_ij / d x^m
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        da[((size_t)i * n + j) * n + m] = spec.a[(size_t)i * n + j].deriv(m).eval(p.x);
  std::vector<double> spray((size_t)n, 0.0);
  for (int l = 0; l < n; ++l) {
    double s = 0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double gamma = 0;
        for (int m = 0; m < n; ++m)
          gamma += ainv[(size_t)l * n + m] *
                   (da[((size_t)m * n + j) * n + k] + da[((size_t)m * n + k) * n + j] -
                    da[((size_t)j * n + k) * n + m]);
        gamma *= 0.5;
        s += gamma * p.y[(size_t)j] * p.y[(size_t)k];
      }
    spray[(size_t)l] = 0.5 * s;
  }
  return spray;
}

} // namespace

TEST_CASE("euclidean pack: every curvature-type object vanishes") {
  MetricSpec s = MetricSpec::from_file(specs_dir() + "euclidean3.json");
  TensorPack pk = evaluate_pack(s, {{0.1, -0.2, 0.05}, {0.7, -0.4, 1.1}});
  auto all_below = [](const std::vector<double>& t, double tol) {
    for (double v : t)
      if (std::abs(v) > tol) return false;
    return true;
  };
  CHECK(all_below(pk.cartan, 1e-15));
  CHECK(all_below(pk.q_up, 1e-15));
  CHECK(all_below(pk.spray, 1e-15));
  CHECK(all_below(pk.berwald_mixed, 1e-15));
  CHECK(all_below(pk.landsberg, 1e-15));
  CHECK(pk.E == doctest::Approx(0.5 * (0.49 + 0.16 + 1.21)).epsilon(1e-14));
}

TEST_CASE("riemannian spray matches the classical Christoffel oracle") {
  // the (1 + x1) conformal-flat case with a hand-checkable structure
  MetricSpec simple = MetricSpec::parse(R"({"dimension":3,"family":"riemannian",
    "a":[[{"terms":[{"powers":[0,0,0],"coeff":1},{"powers":[1,0,0],"coeff":1}]},{"terms":[]},{"terms":[]}],
         [{"terms":[]},{"terms":[{"powers":[0,0,0],"coeff":1},{"powers":[1,0,0],"coeff":1}]},{"terms":[]}],
         [{"terms":[]},{"terms":[]},{"terms":[{"powers":[0,0,0],"coeff":1},{"powers":[1,0,0],"coeff":1}]}]]})");
  MetricSpec curved = MetricSpec::from_file(specs_dir() + "riemannian_curved.json");

  for (const MetricSpec* spec : {&simple, &curved}) {
    for (uint64_t i = 0; i < 5; ++i) {
      ChartPoint p = sample_point(*spec, 210 + i, i);
      TensorPack pk = evaluate_pack(*spec, p);
      const std::vector<double> want = christoffel_spray(*spec, p);
      for (int l = 0; l < 3; ++l)
        CHECK(std::abs(pk.spray[(size_t)l] - want[(size_t)l]) <=
              1e-10 * std::max(1.0, std::abs(want[(size_t)l])));
      // riemannian: Landsberg and Berwald mixed curvature vanish identically
      for (double v : pk.landsberg) CHECK(std::abs(v) <= 1e-12);
      for (double v : pk.berwald_mixed) CHECK(std::abs(v) <= 1e-12);
    }
  }
}

TEST_CASE("position-independent specs are locally Minkowski") {
  MetricSpec s = MetricSpec::from_file(specs_dir() + "finsleroid_const.json");
  TensorPack pk = evaluate_pack(s, {{0.2, -0.1, 0.3}, {0.5, 0.9, -0.6}});
  for (double v : pk.spray) CHECK(std::abs(v) <= 1e-12);
  for (double v : pk.landsberg) CHECK(std::abs(v) <= 1e-12);
  for (double v : pk.berwald_mixed) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("cartan identity residuals") {
  MetricSpec riem = MetricSpec::from_file(specs_dir() + "riemannian_curved.json");
  TensorPack rp = evaluate_pack(riem, sample_point(riem, 31, 0));
  CartanIdentityReport rr = check_cartan_identities(rp);
  CHECK(rr.inverse_derivative_residual <= 1e-12);
  CHECK(rr.curvature_commutator_residual <= 1e-12);
  CHECK(rr.lowered_antisymmetry_residual <= 1e-12);

  MetricSpec fin = MetricSpec::from_file(specs_dir() + "finsleroid_matched.json");
  for (uint64_t i = 0; i < 5; ++i) {
    TensorPack fp = evaluate_pack(fin, sample_point(fin, 37, i));
    CartanIdentityReport fr = check_cartan_identities(fp);
    CHECK(fr.inverse_derivative_residual <= 1e-9 * std::max(1.0, fr.inverse_derivative_scale));
    CHECK(fr.curvature_commutator_residual <=
          1e-9 * std::max(1.0, fr.curvature_commutator_scale));
    CHECK(fr.lowered_antisymmetry_residual <=
          1e-10 * std::max(1.0, fr.lowered_antisymmetry_scale));
    CHECK(fr.lowered_antisymmetry_scale > 1e-4); // the curvature is genuinely nonzero here
  }
}

TEST_CASE("landsberg against the mixed-curvature contraction") {
  MetricSpec riem = MetricSpec::from_file(specs_dir() + "euclidean3.json");
  ContractionIdentityReport r0 = check_landsberg_contraction(evaluate_pack(riem, {{0, 0, 0}, {1, 2, 0.5}}));
  CHECK(r0.residual <= 1e-12);

  MetricSpec fin = MetricSpec::from_file(specs_dir() + "finsleroid_matched.json");
  MetricSpec wrapped = conformal_wrap(fin, PolyScalar::coordinate(3, 0) * 0.1);
  for (uint64_t i = 0; i < 5; ++i) {
    TensorPack pk = evaluate_pack(wrapped, sample_point(wrapped, 41, i));
    ContractionIdentityReport r = check_landsberg_contraction(pk);
    CHECK(r.residual <= 1e-8 * std::max(1.0, r.scale));
    CHECK(r.scale > 1e-6); // nontrivial on this family
  }

  TensorPack mink = evaluate_pack(MetricSpec::from_file(specs_dir() + "finsleroid_const.json"),
                                  {{0, 0, 0}, {0.4, 0.8, -0.3}});
  ContractionIdentityReport rm = check_landsberg_contraction(mink);
  CHECK(rm.residual <= 1e-12);
}

TEST_CASE("homogeneity ladder") {
  for (const char* name : {"riemannian_curved.json", "finsleroid_matched.json",
                           "conformal_finsleroid.json"}) {
    CAPTURE(name);
    MetricSpec s = MetricSpec::from_file(specs_dir() + name);
    TensorPack pk = evaluate_pack(s, sample_point(s, 59, 1));
    const int n = pk.n;
    const auto& y = pk.point.y;

    double yl = 0;
    for (int i = 0; i < n; ++i) yl += y[(size_t)i] * pk.l[(size_t)i];
    CHECK(std::abs(yl - pk.F) <= 1e-10 * pk.F);

    double yyg = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) yyg += y[(size_t)i] * y[(size_t)j] * pk.at2(pk.g, i, j);
    CHECK(std::abs(yyg - 2 * pk.E) <= 1e-10 * pk.E);

    double c_norm = 0, yc = 0, p_norm = 0, yp = 0;
    for (double v : pk.cartan) c_norm = std::max(c_norm, std::abs(v));
    for (double v : pk.berwald_mixed) p_norm = std::max(p_norm, std::abs(v));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double ycij = 0;
        for (int k = 0; k < n; ++k) ycij += y[(size_t)k] * pk.at3(pk.cartan, i, j, k);
        yc = std::max(yc, std::abs(ycij));
        for (int l = 0; l < n; ++l) {
          double ypl = 0;
          for (int k = 0; k < n; ++k) ypl += y[(size_t)k] * pk.at4(pk.berwald_mixed, l, i, j, k);
          yp = std::max(yp, std::abs(ypl));
        }
      }
    CHECK(yc <= 1e-10 * std::max(1.0, c_norm));
    CHECK(yp <= 1e-10 * std::max(1.0, p_norm));

    for (int l = 0; l < n; ++l) {
      double ygi = 0;
      for (int i = 0; i < n; ++i) ygi += y[(size_t)i] * pk.at2(pk.spray_d1, l, i);
      CHECK(std::abs(ygi - 2 * pk.spray[(size_t)l]) <=
            1e-10 * std::max(1.0, std::abs(pk.spray[(size_t)l])));
      for (int i = 0; i < n; ++i) {
        double ygij = 0;
        for (int j = 0; j < n; ++j) ygij += y[(size_t)j] * pk.at3(pk.spray_d2, l, i, j);
        CHECK(std::abs(ygij - pk.at2(pk.spray_d1, l, i)) <=
              1e-10 * std::max(1.0, std::abs(pk.at2(pk.spray_d1, l, i))));
      }
    }
  }
}

TEST_CASE("the two landsberg assemblies agree") {
  MetricSpec s = MetricSpec::from_file(specs_dir() + "conformal_finsleroid.json");
  for (uint64_t i = 0; i < 5; ++i) {
    TensorPack pk = evaluate_pack(s, sample_point(s, 61, i));
    double resid = 0, scale = 0;
    for (size_t k = 0; k < pk.landsberg.size(); ++k) {
      resid = std::max(resid, std::abs(pk.landsberg[k] - pk.landsberg_hder[k]));
      scale = std::max(scale, std::abs(pk.landsberg[k]));
    }
    CHECK(resid <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("pack tensors agree with the finite-difference oracle transitively") {
  MetricSpec s = MetricSpec::from_file(specs_dir() + "finsleroid_matched.json");
  ChartPoint p = sample_point(s, 67, 2);
  TensorPack pk = evaluate_pack(s, p);
  const int n = 3;

  // g from the scalar energy
  oracle::ScalarField e_scalar = [&](const std::vector<double>& x, const std::vector<double>& y) {
    return energy_value(s, {x, y});
  };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<int> mi(6, 0);
      mi[(size_t)(3 + i)] += 1;
      mi[(size_t)(3 + j)] += 1;
      auto fd = oracle::fd_partial(e_scalar, p.x, p.y, mi);
      CHECK(std::abs(pk.at2(pk.g, i, j) - fd.value) <= 1e-6 * std::max(1.0, std::abs(fd.value)));
    }

  // C from the jet-computed g, spray derivatives from the jet-computed spray
  for (int k = 0; k < n; ++k) {
    oracle::VectorField g_of_y = [&](const std::vector<double>& x, const std::vector<double>& y) {
      return evaluate_pack(s, {x, y}).g;
    };
    auto dg = oracle::fd_derivative_vec(g_of_y, p.x, p.y, 3 + k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(std::abs(2.0 * pk.at3(pk.cartan, i, j, k) - dg[(size_t)i * n + j]) <=
              1e-6 * std::max(1.0, std::abs(dg[(size_t)i * n + j])));

    oracle::VectorField spray_of_y =
        [&](const std::vector<double>& x, const std::vector<double>& y) {
          return evaluate_pack(s, {x, y}).spray_d2;
        };
    auto d3 = oracle::fd_derivative_vec(spray_of_y, p.x, p.y, 3 + k);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          CHECK(std::abs(pk.at4(pk.spray_d3, l, i, j, k) - d3[((size_t)l * n + i) * n + j]) <=
                1e-6 * std::max(1.0, std::abs(d3[((size_t)l * n + i) * n + j])));
  }
}

TEST_CASE("indicatrix sectional curvature") {
  MetricSpec euclid = MetricSpec::from_file(specs_dir() + "euclidean3.json");
  TensorPack ep = evaluate_pack(euclid, {{0, 0, 0}, {0.3, -0.8, 0.5}});
  for (uint64_t i = 0; i < 10; ++i) {
    std::vector<double> u(3), w(3);
    for (int k = 0; k < 3; ++k) {
      u[(size_t)k] = uniform(71, i * 8 + (uint64_t)k, -1, 1);
      w[(size_t)k] = uniform(71, i * 8 + 4 + (uint64_t)k, -1, 1);
    }
    CHECK(indicatrix_sectional_curvature(ep, u, w) == doctest::Approx(1.0).epsilon(1e-9));
  }

  // degenerate plane
  std::vector<double> u = {1, 0.5, 0.2};
  std::vector<double> w = {2, 1.0, 0.4};
  CHECK_THROWS_AS((void)indicatrix_sectional_curvature(ep, u, w), error);

  // finsleroid: constant across planes and points of one indicatrix, strictly positive
  MetricSpec fin = MetricSpec::from_file(specs_dir() + "finsleroid_const.json");
  std::vector<double> ks;
  for (uint64_t i = 0; i < 40; ++i) {
    ChartPoint p = sample_point(fin, 73, i);
    p.x = {0, 0, 0};
    if (!is_admissible(fin, p)) continue;
    TensorPack pk = evaluate_pack(fin, p);
    std::vector<double> uu(3), ww(3);
    for (int k = 0; k < 3; ++k) {
      uu[(size_t)k] = uniform(74, i * 8 + (uint64_t)k, -1, 1);
      ww[(size_t)k] = uniform(74, i * 8 + 4 + (uint64_t)k, -1, 1);
    }
    ks.push_back(indicatrix_sectional_curvature(pk, uu, ww));
  }
  REQUIRE(ks.size() > 20);
  double mean = 0;
  for (double k : ks) mean += k;
  mean /= (double)ks.size();
  double sd = 0;
  for (double k : ks) sd += (k - mean) * (k - mean);
  sd = std::sqrt(sd / (double)ks.size());
  CHECK(mean > 0.0);
  CHECK(sd / mean <= 1e-6);
}

TEST_CASE("pack evaluation validates the derivative budget") {
  MetricSpec s = MetricSpec::from_file(specs_dir() + "euclidean3.json");
  ChartPoint p{{0, 0, 0}, {1, 0.5, -0.2}};
  CHECK_THROWS_AS((void)evaluate_pack(s, p, DegreeCaps{3, 0, 5}), error);
  CHECK_THROWS_AS((void)evaluate_pack(s, p, DegreeCaps{3, 1, 4}), error);
  CHECK_NOTHROW((void)evaluate_pack(s, p, DegreeCaps{3, 1, 5}));
}

TEST_CASE("raised derivative budgets stay consistent with the default") {
  MetricSpec s = MetricSpec::from_file(specs_dir() + "finsleroid_const.json");
  ChartPoint p{{0.1, 0, -0.1}, {0.4, 0.9, -0.3}};
  TensorPack base = evaluate_pack(s, p);
  TensorPack high = evaluate_pack(s, p, DegreeCaps{3, 1, 7});
  for (size_t k = 0; k < base.berwald_mixed.size(); ++k)
    CHECK(high.berwald_mixed[k] == doctest::Approx(base.berwald_mixed[k]).epsilon(1e-12));
  for (size_t k = 0; k < base.landsberg.size(); ++k)
    CHECK(high.landsberg[k] == doctest::Approx(base.landsberg[k]).epsilon(1e-12));
  // a sixth y-derivative of the energy is available at the raised cap
  CHECK_NOTHROW((void)high.jets.energy.partial_y({0, 1, 1, 2, 2, 2}));
  CHECK_THROWS_AS((void)base.jets.energy.partial_y({0, 1, 1, 2, 2, 2}), error);
}
