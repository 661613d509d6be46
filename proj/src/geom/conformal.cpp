#include "finsler/geom/conformal.hpp"

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/geom/linalg.hpp"
#include "finsler/rng.hpp"

namespace finsler {

namespace {

size_t i2(int n, int i, int j) { return (size_t)i * n + j; }
size_t i3(int n, int i, int j, int k) { return ((size_t)i * n + j) * n + k; }
size_t i4(int n, int i, int j, int k, int m) { return (((size_t)i * n + j) * n + k) * n + m; }

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Right side of the X^l_ij consequence identity shared by both contracted forms.
std::vector<double> consequence_rhs(const ConformalPack& c) {
  const int n = c.n;
  const TensorPack& pk = c.pack;
  std::vector<double> rhs((size_t)n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = c.y_alpha * pk.at3(pk.cartan_up, l, i, j);
        v -= 0.5 * pk.dE_dy[(size_t)i] * c.x_d1[i2(n, l, j)];
        v -= 0.5 * pk.dE_dy[(size_t)j] * c.x_d1[i2(n, l, i)];
        double gsx = 0;
        for (int s = 0; s < n; ++s) gsx += pk.at2(pk.g, s, j) * c.x_d1[i2(n, s, i)];
        v -= 0.5 * gsx * c.point.y[(size_t)l];
        double t1 = 0, t2 = 0, t3 = 0;
        for (int s = 0; s < n; ++s) {
          t1 += c.x_d1[i2(n, s, i)] * pk.at3(pk.cartan_up, l, j, s);
          t2 += pk.at3(pk.cartan_up, l, i, s) * c.x_d1[i2(n, s, j)];
          t3 += c.x_d1[i2(n, l, s)] * pk.at3(pk.cartan_up, s, i, j);
        }
        v += pk.E * (-t1 - t2 + t3);
        rhs[i3(n, l, i, j)] = v;
      }
  return rhs;
}

} // namespace

ChartPoint sample_admissible_point(const MetricSpec& spec, uint64_t seed, uint64_t index,
                                   double x_box) {
  const int n = spec.dim;
  for (uint64_t attempt = 0; attempt < 256; ++attempt) {
    ChartPoint p;
    const uint64_t base = index * 1024 + attempt * 32;
    p.x.resize((size_t)n);
    p.y.resize((size_t)n);
    double norm2 = 0;
    for (int i = 0; i < n; ++i) {
      p.x[(size_t)i] = uniform(seed, base + (uint64_t)i, -x_box, x_box);
      p.y[(size_t)i] = uniform(seed, base + 16 + (uint64_t)i, -1.5, 1.5);
      norm2 += p.y[(size_t)i] * p.y[(size_t)i];
    }
    if (norm2 < 0.09) continue;
    if (is_admissible(spec, p)) return p;
  }
  fail(errc::inadmissible_point, "sampler found no admissible point");
}

PolyScalar default_alpha(const MetricSpec& spec) {
  const int n = spec.dim;
  if (spec.family == MetricFamily::conformal) return spec.alpha;
  if (spec.family == MetricFamily::finsleroid) {
    const std::vector<double> b0 = spec.b_at(std::vector<double>((size_t)n, 0.0));
    PolyScalar acc = PolyScalar::zero(n);
    for (int i = 0; i < n; ++i) acc = acc + PolyScalar::coordinate(n, i) * b0[(size_t)i];
    return acc;
  }
  return PolyScalar::coordinate(n, 0);
}

const MetricSpec& suite_base_metric(const MetricSpec& spec) {
  return spec.family == MetricFamily::conformal ? *spec.inner : spec;
}

TensorPack wrapped_pack(const MetricSpec& spec, const PolyScalar& alpha, const ChartPoint& p,
                        const DegreeCaps& caps) {
  return evaluate_pack(conformal_wrap(spec, alpha), p, caps);
}

ConformalPack build_conformal_pack(const MetricSpec& spec, const PolyScalar& alpha,
                                   const ChartPoint& p, const DegreeCaps& caps) {
  ConformalPack c;
  c.n = spec.dim;
  c.point = p;
  c.pack = evaluate_pack(spec, p, caps);
  const int n = c.n;
  const TensorPack& pk = c.pack;

  c.alpha_value = alpha.eval(p.x);
  c.alpha_grad.resize((size_t)n);
  double grad_norm = 0;
  for (int i = 0; i < n; ++i) {
    c.alpha_grad[(size_t)i] = alpha.deriv(i).eval(p.x);
    grad_norm += c.alpha_grad[(size_t)i] * c.alpha_grad[(size_t)i];
  }
  if (!(grad_norm > 0.0))
    fail(errc::regularity_violation, "d_x alpha = 0 at the point (homothety)", grad_norm);

  auto xy3 = pk.jets.metric_space;
  std::vector<Jet> alpha_jets((size_t)n);
  for (int m = 0; m < n; ++m) alpha_jets[(size_t)m] = alpha.deriv(m).eval_jet(xy3, p.x);

  // gradient field X^l = g^{lm} alpha_m, jet-valued
  c.x_jet.assign((size_t)n, Jet());
  for (int l = 0; l < n; ++l) {
    Jet acc = Jet::constant(xy3, 0.0);
    for (int m = 0; m < n; ++m) acc += pk.jets.g_inv[i2(n, l, m)] * alpha_jets[(size_t)m];
    c.x_jet[(size_t)l] = acc;
  }
  c.xsq_jet = Jet::constant(xy3, 0.0);
  for (int l = 0; l < n; ++l) c.xsq_jet += c.x_jet[(size_t)l] * alpha_jets[(size_t)l];
  c.estar_jet = pk.jets.energy.truncated(xy3) * c.xsq_jet;

  c.x_up.resize((size_t)n);
  c.x_d1.resize((size_t)n * n);
  c.x_d2.resize((size_t)n * n * n);
  for (int l = 0; l < n; ++l) {
    c.x_up[(size_t)l] = c.x_jet[(size_t)l].value();
    for (int i = 0; i < n; ++i) {
      c.x_d1[i2(n, l, i)] = c.x_jet[(size_t)l].partial_y({i});
      for (int j = 0; j < n; ++j) c.x_d2[i3(n, l, i, j)] = c.x_jet[(size_t)l].partial_y({i, j});
    }
  }
  c.x_d2_alpha.resize((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c.x_d2_alpha[i2(n, i, j)] = c.xsq_jet.partial_y({i, j});

  c.xsq = c.xsq_jet.value();
  c.y_alpha = 0;
  for (int m = 0; m < n; ++m) c.y_alpha += p.y[(size_t)m] * c.alpha_grad[(size_t)m];

  c.xi_up.assign((size_t)n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int s = 0; s < n; ++s) c.xi_up[(size_t)l] += c.x_up[(size_t)s] * c.x_d1[i2(n, l, s)];
  c.eta_up.resize((size_t)n);
  for (int l = 0; l < n; ++l)
    c.eta_up[(size_t)l] = c.x_up[(size_t)l] - c.y_alpha / (2.0 * pk.E) * p.y[(size_t)l];
  c.eta = c.xsq - c.y_alpha * c.y_alpha / (2.0 * pk.E);

  c.theta_valid = c.eta > 1e-10;
  if (c.theta_valid) {
    double num = 0;
    for (int l = 0; l < n; ++l) num += c.xi_up[(size_t)l] * c.alpha_grad[(size_t)l];
    c.theta = num / c.eta;
  }

  // spray difference B^l = (y^m alpha_m) y^l - E X^l and its y-derivatives
  Jet yalpha_jet = Jet::constant(xy3, 0.0);
  for (int m = 0; m < n; ++m)
    yalpha_jet += Jet::variable(xy3, n + m, p.y[(size_t)m]) * alpha_jets[(size_t)m];
  const Jet e3 = pk.jets.energy.truncated(xy3);
  c.b_jet.assign((size_t)n, Jet());
  c.b_d2.resize((size_t)n * n * n);
  c.b_d3.resize((size_t)n * n * n * n);
  for (int l = 0; l < n; ++l) {
    Jet bl = yalpha_jet * Jet::variable(xy3, n + l, p.y[(size_t)l]) - e3 * c.x_jet[(size_t)l];
    c.b_jet[(size_t)l] = bl;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v2 = bl.partial_y({i, j});
        c.b_d2[i3(n, l, i, j)] = v2;
        c.b_d2[i3(n, l, j, i)] = v2;
        for (int k = j; k < n; ++k) {
          const double v3 = bl.partial_y({i, j, k});
          for (auto [a, b2, c2] : {std::array<int, 3>{i, j, k}, {i, k, j}, {j, i, k},
                                   {j, k, i}, {k, i, j}, {k, j, i}})
            c.b_d3[i4(n, l, a, b2, c2)] = v3;
        }
      }
  }

  // associated quadratic energy
  c.estar = c.estar_jet.value();
  c.gstar.resize((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c.gstar[i2(n, i, j)] = c.estar_jet.partial_y({i, j});
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        c.estar_quadratic_residual =
            std::max(c.estar_quadratic_residual, std::abs(c.estar_jet.partial_y({i, j, k})));
  c.gstar_pd = linalg::is_positive_definite(c.gstar, n);
  c.b2 = std::nan("");
  if (c.gstar_pd) {
    c.gstar_inv = linalg::spd_inverse(c.gstar, n, "gstar not positive definite");
    c.xstar.assign((size_t)n, 0.0);
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        c.xstar[(size_t)l] += c.gstar_inv[i2(n, l, j)] * c.alpha_grad[(size_t)j];
    c.b2 = linalg::quadratic_form(c.gstar_inv, c.alpha_grad, c.alpha_grad, n);
  }

  c.scale = (1.0 + pk.F * pk.F) * (1.0 + max_abs(c.alpha_grad));
  return c;
}

GradientFieldReport check_gradient_field(const ConformalPack& c) {
  const int n = c.n;
  const TensorPack& pk = c.pack;
  GradientFieldReport r;
  r.scale = c.scale;

  for (int m = 0; m < n; ++m) {
    double rec = 0;
    for (int l = 0; l < n; ++l) rec += pk.at2(pk.g, l, m) * c.x_up[(size_t)l];
    r.reconstruction = std::max(r.reconstruction, std::abs(rec - c.alpha_grad[(size_t)m]));
  }

  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double lhs = 0, rhs = 0;
      for (int l = 0; l < n; ++l) {
        lhs += pk.at2(pk.g, l, k) * c.x_d1[i2(n, l, i)];
        rhs += pk.at2(pk.g, l, i) * c.x_d1[i2(n, l, k)];
      }
      r.symmetry = std::max(r.symmetry, std::abs(lhs - rhs));
    }

  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) {
      double lift = 0;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
          lift += pk.at2(pk.g_inv, k, l) * c.x_d1[i2(n, m, k)] * pk.at2(pk.g, m, j);
      r.cross_lifting = std::max(r.cross_lifting, std::abs(lift - c.x_d1[i2(n, l, j)]));
    }

  for (int l = 0; l < n; ++l) {
    double rhs = 0;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        rhs += c.x_up[(size_t)s] * c.x_up[(size_t)t] * pk.at3(pk.cartan_up, l, s, t);
    r.self_contraction = std::max(r.self_contraction, std::abs(c.xi_up[(size_t)l] + 2.0 * rhs));
  }

  double eta_tang = 0, xi_tang = 0;
  for (int l = 0; l < n; ++l) {
    eta_tang += c.eta_up[(size_t)l] * pk.l[(size_t)l];
    xi_tang += c.xi_up[(size_t)l] * pk.l[(size_t)l];
  }
  r.tangentiality = std::max(std::abs(eta_tang), std::abs(xi_tang));
  r.eta_min = c.eta;
  return r;
}

DualRouteReport b_dual_route(const ConformalPack& c, const TensorPack& wrapped) {
  const int n = c.n;
  const TensorPack& pk = c.pack;
  DualRouteReport r;
  double norm = 0;

  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double jet_route = c.b_d2[i3(n, l, i, j)];
        const double pack_route =
            wrapped.at3(wrapped.spray_d2, l, i, j) - pk.at3(pk.spray_d2, l, i, j);
        r.b2_routes = std::max(r.b2_routes, std::abs(jet_route - pack_route));
        norm = std::max(norm, std::abs(jet_route));

        // explicit difference formula for the second derivative
        double formula = (i == l ? c.alpha_grad[(size_t)j] : 0.0) +
                         (j == l ? c.alpha_grad[(size_t)i] : 0.0) -
                         pk.at2(pk.g, i, j) * c.x_up[(size_t)l] -
                         pk.dE_dy[(size_t)i] * c.x_d1[i2(n, l, j)] -
                         pk.dE_dy[(size_t)j] * c.x_d1[i2(n, l, i)] -
                         pk.E * c.x_d2[i3(n, l, i, j)];
        r.b2_formula = std::max(r.b2_formula, std::abs(jet_route - formula));

        for (int k = 0; k < n; ++k) {
          const double jr = c.b_d3[i4(n, l, i, j, k)];
          const double pr =
              wrapped.at4(wrapped.spray_d3, l, i, j, k) - pk.at4(pk.spray_d3, l, i, j, k);
          r.b3_routes = std::max(r.b3_routes, std::abs(jr - pr));
          norm = std::max(norm, std::abs(jr));
        }
      }
  r.scale = c.scale * (1.0 + norm);
  return r;
}

TransformationReport landsberg_transformation(const ConformalPack& c, const TensorPack& wrapped) {
  const int n = c.n;
  const TensorPack& pk = c.pack;
  TransformationReport r;
  double norm = 0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double rhs = pk.at3(pk.landsberg, l, i, j);
        rhs -= c.y_alpha * pk.at3(pk.cartan_up, l, i, j);
        rhs += 0.5 * pk.dE_dy[(size_t)i] * c.x_d1[i2(n, l, j)];
        rhs += 0.5 * pk.dE_dy[(size_t)j] * c.x_d1[i2(n, l, i)];
        double gsx = 0;
        for (int s = 0; s < n; ++s) gsx += pk.at2(pk.g, s, j) * c.x_d1[i2(n, s, i)];
        rhs += 0.5 * gsx * c.point.y[(size_t)l];
        rhs += pk.E * c.x_d2[i3(n, l, i, j)];
        for (int s = 0; s < n; ++s) {
          rhs += pk.E * c.x_d1[i2(n, s, i)] * pk.at3(pk.cartan_up, l, j, s);
          rhs += pk.E * pk.at3(pk.cartan_up, l, i, s) * c.x_d1[i2(n, s, j)];
          rhs -= pk.E * c.x_d1[i2(n, l, s)] * pk.at3(pk.cartan_up, s, i, j);
        }
        const double lhs = wrapped.at3(wrapped.landsberg, l, i, j);
        r.residual = std::max(r.residual, std::abs(lhs - rhs));
        norm = std::max({norm, std::abs(lhs)});
      }
  r.scale = c.scale * (1.0 + norm);
  return r;
}

InvarianceSample contracted_invariance_sample(const ConformalPack& c, const TensorPack& wrapped) {
  const int n = c.n;
  const TensorPack& pk = c.pack;
  InvarianceSample s;
  double b3_norm = 0, p_norm = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double land = 0;
      for (int l = 0; l < n; ++l) {
        land += (wrapped.at3(wrapped.landsberg, l, i, j) - pk.at3(pk.landsberg, l, i, j)) *
                c.alpha_grad[(size_t)l];
        p_norm = std::max({p_norm, std::abs(wrapped.at3(wrapped.landsberg, l, i, j)),
                           std::abs(pk.at3(pk.landsberg, l, i, j))});
      }
      s.landsberg_contracted = std::max(s.landsberg_contracted, std::abs(land));
      for (int k = 0; k < n; ++k) {
        double mixed = 0;
        for (int l = 0; l < n; ++l) {
          mixed += c.b_d3[i4(n, l, i, j, k)] * c.alpha_grad[(size_t)l];
          b3_norm = std::max(b3_norm, std::abs(c.b_d3[i4(n, l, i, j, k)]));
        }
        s.mixed_contracted = std::max(s.mixed_contracted, std::abs(mixed));
      }
    }
  s.mixed_full = b3_norm;
  // the difference tensor is (-1)-homogeneous in y, so the floor must not swamp it at
  // large |y|; both residual and norm shrink together and their ratio is scale-free
  s.scale = c.scale * std::max(b3_norm, 1e-12);
  // the Landsberg tensor is 0-homogeneous in y and vanishes exactly on riemannian packs,
  // so an additive floor is the right normalization there
  s.landsberg_scale = c.scale * (1.0 + p_norm);
  return s;
}

ConsequenceReport invariance_consequences(const ConformalPack& c) {
  const int n = c.n;
  const TensorPack& pk = c.pack;
  const std::vector<double> rhs = consequence_rhs(c);
  ConsequenceReport r;
  double norm = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double rhs_a = 0;
      for (int l = 0; l < n; ++l) rhs_a += rhs[i3(n, l, i, j)] * c.alpha_grad[(size_t)l];
      const double lhs_a = pk.E * c.x_d2_alpha[i2(n, i, j)];
      r.alpha_contracted = std::max(r.alpha_contracted, std::abs(lhs_a - rhs_a));
      norm = std::max(norm, std::abs(lhs_a));
    }
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i) {
      double lhs_x = 0, rhs_x = 0;
      for (int j = 0; j < n; ++j) {
        lhs_x += pk.E * c.x_up[(size_t)j] * c.x_d2[i3(n, l, i, j)];
        rhs_x += c.x_up[(size_t)j] * rhs[i3(n, l, i, j)];
      }
      r.x_contracted = std::max(r.x_contracted, std::abs(lhs_x - rhs_x));
      norm = std::max(norm, std::abs(lhs_x));
    }
  r.scale = c.scale * (1.0 + norm);
  return r;
}

CubicContractionReport cubic_contraction_identity(const ConformalPack& c) {
  const int n = c.n;
  const TensorPack& pk = c.pack;
  CubicContractionReport r;

  double xxa = 0; // X^k X^j_k alpha_j
  for (int k = 0; k < n; ++k) xxa += c.xi_up[(size_t)k] * c.alpha_grad[(size_t)k];

  std::vector<double> xsa((size_t)n, 0.0); // X^s_i alpha_s per free i
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < n; ++s) xsa[(size_t)i] += c.alpha_grad[(size_t)s] * c.x_d1[i2(n, s, i)];

  std::vector<double> lhs((size_t)n, 0.0), rhsv((size_t)n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double bl = 0;
        for (int l = 0; l < n; ++l) bl += c.b_d3[i4(n, l, i, j, k)] * c.alpha_grad[(size_t)l];
        acc += c.x_up[(size_t)k] * c.x_up[(size_t)j] * bl;
      }
    lhs[(size_t)i] = acc / 3.0;

    double qterm = 0;
    for (int s = 0; s < n; ++s)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          qterm += c.xi_up[(size_t)s] * c.x_up[(size_t)p] * c.x_up[(size_t)q] *
                   pk.at4(pk.q_low, p, i, s, q);
    rhsv[(size_t)i] = 0.5 * (c.xsq * xsa[(size_t)i] - xxa * c.alpha_grad[(size_t)i]) +
                      c.y_alpha / (4.0 * pk.E) *
                          (xxa * pk.dE_dy[(size_t)i] - c.y_alpha * xsa[(size_t)i]) +
                      pk.E * qterm;
    r.residual = std::max(r.residual, std::abs(lhs[(size_t)i] - rhsv[(size_t)i]));
    r.lhs_norm = std::max(r.lhs_norm, std::abs(lhs[(size_t)i]));
    r.rhs_norm = std::max(r.rhs_norm, std::abs(rhsv[(size_t)i]));
  }

  // scalar corollary: contract with xi
  for (int i = 0; i < n; ++i) {
    r.scalar_lhs += c.xi_up[(size_t)i] * lhs[(size_t)i];
    r.scalar_rhs += c.xi_up[(size_t)i] * rhsv[(size_t)i];
  }
  r.scale = c.scale * (1.0 + std::max(r.lhs_norm, r.rhs_norm));
  return r;
}

GramReport gram_tests(const ConformalPack& c) {
  const int n = c.n;
  const TensorPack& pk = c.pack;
  GramReport r;
  auto gdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    return linalg::quadratic_form(pk.g, a, b, n);
  };
  const double ee = gdot(c.eta_up, c.eta_up);
  const double xx = gdot(c.xi_up, c.xi_up);
  const double ex = gdot(c.eta_up, c.xi_up);
  r.gram1 = ee * xx - ex * ex;
  r.gram1_scale = std::max(1e-12, ee * xx);

  r.xstar_available = c.gstar_pd;
  if (c.gstar_pd) {
    const double a11 = c.xsq;
    const double a12 = gdot(c.x_up, c.xstar);
    const double a13 = c.y_alpha;
    const double a22 = gdot(c.xstar, c.xstar);
    double a23 = 0;
    for (int k = 0; k < n; ++k) a23 += c.xstar[(size_t)k] * pk.dE_dy[(size_t)k];
    const double a33 = 2.0 * pk.E;
    r.gram2 = linalg::det({a11, a12, a13, a12, a22, a23, a13, a23, a33}, 3);
    r.gram2_scale = std::max(1e-12, a11 * a22 * a33);
  }
  return r;
}

ThetaReport theta_and_gstar_decomposition(const ConformalPack& c) {
  if (!c.theta_valid)
    fail(errc::excluded_ray, "projected field vanishes here (on the +-X* ray)", c.eta);
  const int n = c.n;
  const TensorPack& pk = c.pack;
  ThetaReport r;
  r.theta = c.theta;
  r.scale = c.scale * (1.0 + max_abs(c.gstar));

  for (int l = 0; l < n; ++l)
    r.proportionality =
        std::max(r.proportionality, std::abs(c.xi_up[(size_t)l] - c.theta * c.eta_up[(size_t)l]));

  for (int j = 0; j < n; ++j) {
    double lhs = 0;
    for (int l = 0; l < n; ++l) lhs += c.x_d1[i2(n, l, j)] * c.alpha_grad[(size_t)l];
    const double rhs = c.theta * (c.alpha_grad[(size_t)j] -
                                  c.y_alpha / (2.0 * pk.E) * pk.dE_dy[(size_t)j]);
    r.gradient_law = std::max(r.gradient_law, std::abs(lhs - rhs));
  }

  const double ya = c.y_alpha, E = pk.E, th = c.theta, eta = c.eta;
  const double A = c.xsq - th * ya / 2.0;
  const double P = th * ya / (4.0 * E) * (ya / (2.0 * eta) * (th - ya / E) - 1.0);
  const double R = th * E / (2.0 * eta) * (th - ya / E);
  const double Q = th / 2.0 * (1.0 + ya * ya / (2.0 * E * eta) - th * ya / (2.0 * eta));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double recon = A * pk.at2(pk.g, i, j) + P * pk.dE_dy[(size_t)i] * pk.dE_dy[(size_t)j] +
                           R * c.alpha_grad[(size_t)i] * c.alpha_grad[(size_t)j] +
                           Q * (c.alpha_grad[(size_t)i] * pk.dE_dy[(size_t)j] +
                                c.alpha_grad[(size_t)j] * pk.dE_dy[(size_t)i]);
      r.reconstruction = std::max(r.reconstruction, std::abs(c.gstar[i2(n, i, j)] - recon));
    }

  r.coeff_identity_1 = std::abs(2.0 * E * P + ya * Q);
  r.coeff_identity_2 = std::abs(2.0 * E * Q + R * ya - E * th);
  return r;
}

AssociatedRiemannianReport associated_riemannian(const MetricSpec& spec, const PolyScalar& alpha,
                                                 const std::vector<double>& x, int nsamples,
                                                 uint64_t seed) {
  const int n = spec.dim;
  AssociatedRiemannianReport r;
  for (int s = 0; s < nsamples; ++s) {
    ChartPoint p;
    p.x = x;
    p.y.resize((size_t)n);
    for (int i = 0; i < n; ++i)
      p.y[(size_t)i] = uniform(seed, (uint64_t)s * 16 + (uint64_t)i, -1.5, 1.5);
    if (!is_admissible(spec, p)) {
      ++r.skipped;
      continue;
    }
    ConformalPack c = build_conformal_pack(spec, alpha, p);
    if (r.samples == 0) {
      r.gstar = c.gstar;
      r.b2 = c.b2;
      r.pd = c.gstar_pd;
    } else {
      for (size_t k = 0; k < r.gstar.size(); ++k)
        r.entry_deviation = std::max(r.entry_deviation, std::abs(c.gstar[k] - r.gstar[k]));
    }
    r.quadratic_residual = std::max(r.quadratic_residual, c.estar_quadratic_residual);
    ++r.samples;
  }
  if (r.samples == 0) fail(errc::inadmissible_point, "no admissible sample for gstar");
  return r;
}

SubspaceConstancyReport level_subspace_constancy(const MetricSpec& spec, const PolyScalar& alpha,
                                           const std::vector<double>& p, int ndirs,
                                           uint64_t seed) {
  const int n = spec.dim;
  if (n < 3)
    fail(errc::dimension,
         "the level-set subspace must have dimension >= 2 and be connected; n >= 3 required");

  // reference associated metric at p
  AssociatedRiemannianReport assoc = associated_riemannian(spec, alpha, p, 8, seed ^ 0x5eed);
  if (!assoc.pd)
    fail(errc::convexity_failure, "associated metric not positive definite at the base point");
  const std::vector<double> gstar = assoc.gstar;
  const std::vector<double> gstar_inv = linalg::spd_inverse(gstar, n, "gstar not pd");

  std::vector<double> agrad((size_t)n);
  for (int i = 0; i < n; ++i) agrad[(size_t)i] = alpha.deriv(i).eval(p);

  // basis of ker(d alpha): e_k - (alpha_k / alpha_m) e_m for k != m, gstar-orthonormalized
  int m = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(agrad[(size_t)i]) > std::abs(agrad[(size_t)m])) m = i;
  if (agrad[(size_t)m] == 0.0) fail(errc::regularity_violation, "d alpha = 0 at the base point");
  std::vector<std::vector<double>> basis;
  for (int k = 0; k < n; ++k) {
    if (k == m) continue;
    std::vector<double> w((size_t)n, 0.0);
    w[(size_t)k] = 1.0;
    w[(size_t)m] = -agrad[(size_t)k] / agrad[(size_t)m];
    for (const auto& u : basis) {
      const double proj = linalg::quadratic_form(gstar, w, u, n);
      for (int i = 0; i < n; ++i) w[(size_t)i] -= proj * u[(size_t)i];
    }
    const double norm = std::sqrt(linalg::quadratic_form(gstar, w, w, n));
    for (double& v : w) v /= norm;
    basis.push_back(std::move(w));
  }

  std::vector<double> xstar((size_t)n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) xstar[(size_t)l] += gstar_inv[i2(n, l, j)] * agrad[(size_t)j];

  SubspaceConstancyReport rep;
  std::vector<double> xsqs, fxxas, ks;
  for (int d = 0; d < ndirs; ++d) {
    // random unit combination of the basis directions
    std::vector<double> coeff(basis.size());
    double cn = 0;
    for (size_t a = 0; a < basis.size(); ++a) {
      coeff[a] = uniform(seed, (uint64_t)d * 8 + a, -1.0, 1.0);
      cn += coeff[a] * coeff[a];
    }
    if (cn == 0.0) coeff[0] = cn = 1.0;
    std::vector<double> v((size_t)n, 0.0);
    for (size_t a = 0; a < basis.size(); ++a)
      for (int i = 0; i < n; ++i) v[(size_t)i] += coeff[a] / std::sqrt(cn) * basis[a][(size_t)i];

    ChartPoint pt{p, v};
    if (!is_admissible(spec, pt)) {
      ++rep.skipped;
      continue;
    }
    ConformalPack c = build_conformal_pack(spec, alpha, pt);
    const double fstar = std::sqrt(linalg::quadratic_form(gstar, v, v, n));
    double z0 = 0;
    for (int i = 0; i < n; ++i) z0 += xstar[(size_t)i] * c.pack.dE_dy[(size_t)i];
    z0 /= c.pack.E;
    const double k = fstar * z0;

    double xia = 0;
    for (int l = 0; l < n; ++l) xia += c.xi_up[(size_t)l] * c.alpha_grad[(size_t)l];
    const double fxxa = c.pack.F * xia;
    const double k_alt = -c.pack.F * xia / std::pow(c.xsq, 1.5);

    xsqs.push_back(c.xsq);
    fxxas.push_back(fxxa);
    ks.push_back(k);
    rep.k_alt_max_diff = std::max(rep.k_alt_max_diff, std::abs(k - k_alt));
    ++rep.directions;
  }
  if (rep.directions == 0) fail(errc::inadmissible_point, "no admissible direction in T_pN");

  auto spread = [](const std::vector<double>& vs, double& mean_out) {
    double lo = vs[0], hi = vs[0], mean = 0;
    for (double v : vs) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      mean += v;
    }
    mean_out = mean / (double)vs.size();
    return hi - lo;
  };
  rep.xsq_spread = spread(xsqs, rep.xsq_mean);
  rep.fxxa_spread = spread(fxxas, rep.fxxa_mean);
  rep.k_spread = spread(ks, rep.k_mean);
  return rep;
}

AxisReconstructionReport finsleroid_gradient_reconstruction(const ConformalPack& c,
                                                            const MetricSpec& spec) {
  const int n = c.n;
  const FinsleroidData d = finsleroid_data(spec, c.point);
  AxisReconstructionReport r;
  double norm = 0;
  for (int l = 0; l < n; ++l) {
    const double lhs = c.pack.E * c.x_up[(size_t)l];
    const double rhs = 0.5 * (d.b * d.b + d.q * d.q) * d.b_up[(size_t)l] -
                       0.5 * d.g * d.q * d.v_up[(size_t)l];
    r.componentwise = std::max(r.componentwise, std::abs(lhs - rhs));
    norm = std::max(norm, std::abs(rhs));
  }
  r.contracted = std::abs(c.estar - 0.5 * (d.b * d.b + d.q * d.q));
  r.scale = c.scale * (1.0 + norm);
  return r;
}

} // namespace finsler
