#include "finsler/geom/tensor_pack.hpp"

#include <cmath>
#include <sstream>

#include "finsler/errors.hpp"
#include "finsler/geom/linalg.hpp"

namespace finsler {

namespace {

size_t i2(int n, int i, int j) { return (size_t)i * n + j; }
size_t i3(int n, int i, int j, int k) { return ((size_t)i * n + j) * n + k; }
size_t i4(int n, int i, int j, int k, int m) { return (((size_t)i * n + j) * n + k) * n + m; }

} // namespace

TensorPack evaluate_pack(const MetricSpec& spec, const ChartPoint& p, const DegreeCaps& caps_in) {
  const int n = spec.dim;
  DegreeCaps caps = caps_in;
  if (caps.dim == 0) caps.dim = n;
  if (caps.dim != n) fail(errc::config, "caps dimension does not match the spec");
  if (caps.x_cap < 1) fail(errc::config, "spray and Landsberg tensors consume one x order");
  if (caps.y_cap < 5) fail(errc::config, "the Berwald mixed curvature consumes five y orders");
  check_admissible(spec, p);

  TensorPack pk;
  pk.n = n;
  pk.point = p;
  pk.jets.full = JetSpace::get(caps);
  pk.jets.metric_space = JetSpace::get({n, caps.x_cap, caps.y_cap - 2});
  pk.jets.spray_space = JetSpace::get({n, caps.x_cap - 1, caps.y_cap - 2});

  pk.jets.energy = energy_jet(spec, p, caps);
  const Jet& e = pk.jets.energy;
  pk.E = e.value();
  pk.F = std::sqrt(2.0 * pk.E);

  pk.dE_dy.resize((size_t)n);
  pk.l.resize((size_t)n);
  for (int i = 0; i < n; ++i) {
    pk.dE_dy[(size_t)i] = e.partial_y({i});
    pk.l[(size_t)i] = pk.dE_dy[(size_t)i] / pk.F;
  }

  // fundamental tensor as jets at (x_cap, 3)
  pk.jets.g.assign((size_t)n * n, Jet());
  std::vector<Jet> dy((size_t)n);
  for (int i = 0; i < n; ++i) dy[(size_t)i] = e.deriv_y(i);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Jet gij = dy[(size_t)i].deriv_y(j);
      pk.jets.g[i2(n, i, j)] = gij;
      if (j != i) pk.jets.g[i2(n, j, i)] = gij;
    }
  }

  pk.g.resize((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pk.g[i2(n, i, j)] = pk.jets.g[i2(n, i, j)].value();
  try {
    (void)linalg::cholesky(pk.g, n, "fundamental tensor not positive definite");
  } catch (const error&) {
    std::ostringstream os;
    os << "fundamental tensor not positive definite at x=(";
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << p.x[(size_t)i];
    os << "), y=(";
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << p.y[(size_t)i];
    os << ")";
    fail(errc::convexity_failure, os.str());
  }

  pk.jets.g_inv = linalg::jet_inverse(pk.jets.g, n);
  pk.g_inv.resize((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pk.g_inv[i2(n, i, j)] = pk.jets.g_inv[i2(n, i, j)].value();

  // Cartan tensor and its raised form
  pk.cartan.resize((size_t)n * n * n);
  pk.dg_dx.resize((size_t)n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        pk.cartan[i3(n, i, j, k)] = 0.5 * pk.jets.g[i2(n, i, j)].partial_y({k});
        pk.dg_dx[i3(n, i, j, k)] = pk.jets.g[i2(n, i, j)].deriv_x(k).value();
      }
    }
  pk.cartan_up.resize((size_t)n * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int m = 0; m < n; ++m) s += pk.g_inv[i2(n, l, m)] * pk.cartan[i3(n, i, j, m)];
        pk.cartan_up[i3(n, l, i, j)] = s;
      }

  // y-derivative of the raised Cartan tensor via jets (inverse metric stays jet-valued)
  auto xy2 = JetSpace::get({n, caps.x_cap, caps.y_cap - 3});
  std::vector<Jet> ginv2((size_t)n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ginv2[i2(n, a, b)] = pk.jets.g_inv[i2(n, a, b)].truncated(xy2);
  pk.dcartan_up.resize((size_t)n * n * n * n);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      std::vector<Jet> c_low((size_t)n);
      for (int m = 0; m < n; ++m) c_low[(size_t)m] = pk.jets.g[i2(n, j, k)].deriv_y(m) * 0.5;
      for (int l = 0; l < n; ++l) {
        Jet cup = Jet::constant(xy2, 0.0);
        for (int m = 0; m < n; ++m) cup += ginv2[i2(n, l, m)] * c_low[(size_t)m];
        for (int i = 0; i < n; ++i) {
          const double v = cup.partial_y({i});
          pk.dcartan_up[i4(n, l, j, k, i)] = v;
          pk.dcartan_up[i4(n, l, k, j, i)] = v;
        }
      }
    }

  // vv-curvature, raised and fully lowered (last-slot lowering)
  pk.q_up.resize((size_t)n * n * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0;
          for (int m = 0; m < n; ++m)
            s += pk.cartan_up[i3(n, l, j, m)] * pk.cartan_up[i3(n, m, i, k)] -
                 pk.cartan_up[i3(n, l, i, m)] * pk.cartan_up[i3(n, m, j, k)];
          pk.q_up[i4(n, l, i, j, k)] = s;
        }
  pk.q_low.resize((size_t)n * n * n * n);
  for (int pi = 0; pi < n; ++pi)
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < n; ++s)
        for (int r = 0; r < n; ++r) {
          double v = 0;
          for (int l = 0; l < n; ++l) v += pk.g[i2(n, l, r)] * pk.q_up[i4(n, l, pi, i, s)];
          pk.q_low[i4(n, pi, i, s, r)] = v;
        }

  // geodesic spray at (0,3): G^l = (1/2) g^{lm} (y^k d^2E/dy^m dx^k - dE/dx^m)
  std::vector<Jet> bracket((size_t)n);
  auto bracket_space = JetSpace::get({n, caps.x_cap - 1, caps.y_cap - 1});
  for (int m = 0; m < n; ++m) {
    Jet acc = Jet::constant(bracket_space, 0.0);
    for (int k = 0; k < n; ++k) {
      Jet mixed = dy[(size_t)m].deriv_x(k);
      Jet yk = Jet::variable(bracket_space, n + k, p.y[(size_t)k]);
      acc += yk * mixed;
    }
    acc -= e.deriv_x(m).truncated(bracket_space);
    bracket[(size_t)m] = acc.truncated(pk.jets.spray_space);
  }
  pk.jets.spray.assign((size_t)n, Jet());
  pk.spray.resize((size_t)n);
  for (int l = 0; l < n; ++l) {
    Jet gl = Jet::constant(pk.jets.spray_space, 0.0);
    for (int m = 0; m < n; ++m)
      gl += pk.jets.g_inv[i2(n, l, m)].truncated(pk.jets.spray_space) * bracket[(size_t)m];
    gl *= 0.5;
    pk.jets.spray[(size_t)l] = gl;
    pk.spray[(size_t)l] = gl.value();
  }

  // y-derivatives of the spray
  pk.spray_d1.resize((size_t)n * n);
  pk.spray_d2.resize((size_t)n * n * n);
  pk.spray_d3.resize((size_t)n * n * n * n);
  pk.berwald_mixed.resize((size_t)n * n * n * n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      Jet g1 = pk.jets.spray[(size_t)l].deriv_y(i);
      pk.spray_d1[i2(n, l, i)] = g1.value();
      for (int j = i; j < n; ++j) {
        Jet g2 = g1.deriv_y(j);
        pk.spray_d2[i3(n, l, i, j)] = g2.value();
        pk.spray_d2[i3(n, l, j, i)] = g2.value();
        for (int k = j; k < n; ++k) {
          const double v = g2.partial_y({k});
          for (auto [a, b, c] : {std::array<int, 3>{i, j, k}, {i, k, j}, {j, i, k},
                                 {j, k, i}, {k, i, j}, {k, j, i}}) {
            pk.spray_d3[i4(n, l, a, b, c)] = v;
            pk.berwald_mixed[i4(n, l, a, b, c)] = -v;
          }
        }
      }
    }
  }

  // Landsberg tensor, primary assembly from objects already in the pack
  pk.landsberg.resize((size_t)n * n * n);
  pk.landsberg_hder.resize((size_t)n * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0, s_h = 0;
        for (int m = 0; m < n; ++m) {
          double inner = pk.dg_dx[i3(n, j, m, i)];
          double inner_h = inner;
          for (int k = 0; k < n; ++k) {
            inner -= 2.0 * pk.spray_d1[i2(n, k, i)] * pk.cartan[i3(n, j, k, m)];
            // horizontal route: delta g_jm / delta x^i with d g/d y = 2 C re-extracted
            // from the metric jets rather than the cartan field
            inner_h -= pk.spray_d1[i2(n, k, i)] * pk.jets.g[i2(n, j, m)].partial_y({k});
            inner -= pk.spray_d2[i3(n, k, i, j)] * pk.g[i2(n, k, m)] +
                     pk.spray_d2[i3(n, k, i, m)] * pk.g[i2(n, j, k)];
            inner_h -= pk.spray_d2[i3(n, k, i, j)] * pk.g[i2(n, k, m)] +
                       pk.spray_d2[i3(n, k, i, m)] * pk.g[i2(n, j, k)];
          }
          s += pk.g_inv[i2(n, l, m)] * inner;
          s_h += pk.g_inv[i2(n, l, m)] * inner_h;
        }
        pk.landsberg[i3(n, l, i, j)] = 0.5 * s;
        pk.landsberg_hder[i3(n, l, i, j)] = 0.5 * s_h;
      }

  return pk;
}

CartanIdentityReport check_cartan_identities(const TensorPack& pk) {
  const int n = pk.n;
  CartanIdentityReport r;

  // d g^{lm}/d y^i against -2 C_i^{lm}, both sides from independent jet paths
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      for (int i = 0; i < n; ++i) {
        const double lhs = pk.jets.g_inv[i2(n, l, m)].partial_y({i});
        double rhs = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            rhs += pk.g_inv[i2(n, l, a)] * pk.g_inv[i2(n, m, b)] * pk.cartan[i3(n, a, b, i)];
        rhs *= -2.0;
        r.inverse_derivative_residual =
            std::max(r.inverse_derivative_residual, std::abs(lhs - rhs));
        r.inverse_derivative_scale = std::max(r.inverse_derivative_scale, std::abs(rhs));
      }
    }

  // commutator of raised-Cartan derivatives against twice the vv-curvature
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double lhs =
              pk.dcartan_up[i4(n, l, j, k, i)] - pk.dcartan_up[i4(n, l, i, k, j)];
          const double rhs = 2.0 * pk.q_up[i4(n, l, i, j, k)];
          r.curvature_commutator_residual =
              std::max(r.curvature_commutator_residual, std::abs(lhs - rhs));
          r.curvature_commutator_scale =
              std::max(r.curvature_commutator_scale, std::abs(rhs));
        }

  for (int p = 0; p < n; ++p)
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < n; ++s)
        for (int q = 0; q < n; ++q) {
          r.lowered_antisymmetry_residual =
              std::max(r.lowered_antisymmetry_residual,
                       std::abs(pk.at4(pk.q_low, p, i, s, q) + pk.at4(pk.q_low, i, p, s, q)));
          r.lowered_antisymmetry_scale =
              std::max(r.lowered_antisymmetry_scale, std::abs(pk.at4(pk.q_low, p, i, s, q)));
        }
  return r;
}

ContractionIdentityReport check_landsberg_contraction(const TensorPack& pk) {
  const int n = pk.n;
  ContractionIdentityReport r;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double contraction = 0;
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k)
            contraction += pk.l[(size_t)m] * pk.g_inv[i2(n, k, l)] *
                           pk.at4(pk.berwald_mixed, m, i, j, k);
        contraction *= 0.5 * pk.F;
        const double lhs = pk.at3(pk.landsberg, l, i, j);
        r.residual = std::max(r.residual, std::abs(lhs + contraction));
        r.scale = std::max({r.scale, std::abs(lhs), std::abs(contraction)});
      }
  return r;
}

double indicatrix_sectional_curvature(const TensorPack& pk, std::vector<double> u,
                                      std::vector<double> w) {
  const int n = pk.n;
  auto gdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    return linalg::quadratic_form(pk.g, a, b, n);
  };
  // project against the Liouville direction: v -> v - g(v,y)/g(y,y) y
  const double yy = 2.0 * pk.E;
  const double uy = gdot(u, pk.point.y);
  const double wy = gdot(w, pk.point.y);
  for (int i = 0; i < n; ++i) {
    u[(size_t)i] -= uy / yy * pk.point.y[(size_t)i];
    w[(size_t)i] -= wy / yy * pk.point.y[(size_t)i];
  }
  const double guu = gdot(u, u), gww = gdot(w, w), guw = gdot(u, w);
  const double gram = guu * gww - guw * guw;
  if (!(gram > 1e-12 * guu * gww) || !(guu > 0) || !(gww > 0))
    fail(errc::degenerate_plane, "sectional plane is degenerate after projection", gram);

  double num = 0;
  for (int p = 0; p < n; ++p)
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < n; ++s)
        for (int r = 0; r < n; ++r)
          num += u[(size_t)p] * w[(size_t)i] * w[(size_t)s] * u[(size_t)r] *
                 pk.at4(pk.q_low, p, i, s, r);
  // the plane lives at y/F on the indicatrix; the curvature term is (-2)-homogeneous in y,
  // so rescaling from y to y/F multiplies it by F^2 = 2E
  return 1.0 + 2.0 * pk.E * num / gram;
}

} // namespace finsler
