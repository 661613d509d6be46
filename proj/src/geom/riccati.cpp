#include "finsler/geom/riccati.hpp"

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/geom/linalg.hpp"

namespace finsler {

namespace {

void check_admissible_k(double K) {
  if (!(K > -4.0 && K < 4.0))
    fail(errc::admissibility, "the line constant must satisfy -4 < K < 4", K);
}

void check_fstar(double fstar, double estar) {
  if (!(fstar > 0.0)) fail(errc::admissibility, "F* must be positive", fstar);
  if (std::abs(2.0 * estar - fstar * fstar) > 1e-9 * fstar * fstar)
    fail(errc::config, "E* must equal F*^2 / 2", estar);
}

struct LineContext {
  std::vector<double> xstar;
  double fstar = 0;
  double e_at_v = 0;
};

LineContext line_context(const MetricSpec& spec, const PolyScalar& alpha,
                         const std::vector<double>& p, const std::vector<double>& v) {
  const int n = spec.dim;
  double dot = 0, vnorm = 0, anorm = 0;
  std::vector<double> agrad((size_t)n);
  for (int i = 0; i < n; ++i) {
    agrad[(size_t)i] = alpha.deriv(i).eval(p);
    dot += agrad[(size_t)i] * v[(size_t)i];
    vnorm += v[(size_t)i] * v[(size_t)i];
    anorm += agrad[(size_t)i] * agrad[(size_t)i];
  }
  if (std::abs(dot) > 1e-12 * std::sqrt(vnorm * anorm))
    fail(errc::config, "the starting direction must satisfy v(alpha) = 0", dot);

  AssociatedRiemannianReport assoc = associated_riemannian(spec, alpha, p, 8, 0x11c3);
  if (!assoc.pd) fail(errc::convexity_failure, "associated metric not positive definite");
  const std::vector<double> ginv = linalg::spd_inverse(assoc.gstar, n, "gstar not pd");

  LineContext ctx;
  ctx.xstar.assign((size_t)n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      ctx.xstar[(size_t)l] += ginv[(size_t)l * n + j] * agrad[(size_t)j];
  ctx.fstar = std::sqrt(linalg::quadratic_form(assoc.gstar, v, v, n));
  ctx.e_at_v = energy_value(spec, {p, v});
  return ctx;
}

// logarithmic derivative of the energy along the line via a first-order jet in y
double log_derivative(const MetricSpec& spec, const std::vector<double>& p,
                      const std::vector<double>& y, const std::vector<double>& xstar) {
  const int n = spec.dim;
  Jet e = energy_jet(spec, {p, y}, {n, 0, 1});
  double num = 0;
  for (int i = 0; i < n; ++i) num += xstar[(size_t)i] * e.partial_y({i});
  return num / e.value();
}

} // namespace

double closed_form_z(double K, double fstar, double estar, double t) {
  check_admissible_k(K);
  check_fstar(fstar, estar);
  return 2.0 * (2.0 * t + K * fstar) / (2.0 * t * t + t * K * fstar + 4.0 * estar);
}

double closed_form_z_prime(double K, double fstar, double estar, double t) {
  check_admissible_k(K);
  check_fstar(fstar, estar);
  const double num = 2.0 * (2.0 * t + K * fstar);
  const double den = 2.0 * t * t + t * K * fstar + 4.0 * estar;
  const double dden = 4.0 * t + K * fstar;
  return (4.0 * den - num * dden) / (den * den);
}

double riccati_residual(const std::vector<RiccatiSample>& samples, double a2, double b2) {
  if (!(a2 > 0.0)) fail(errc::admissibility, "a^2 must be positive", a2);
  const double b4 = b2 * b2;
  double worst = 0;
  for (const RiccatiSample& s : samples) {
    const double r = (a2 + s.t * s.t * b2 * (1.0 - b2)) * s.z_prime +
                     0.5 * (a2 + s.t * s.t * b2 * (1.0 - 2.0 * b2)) * s.z * s.z +
                     2.0 * s.t * b4 * s.z - 2.0 * b4;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double line_exponent(double K, double fstar, double t) {
  check_admissible_k(K);
  const double root = std::sqrt(16.0 - K * K);
  return K / root *
         (std::atan((4.0 * t / fstar + K) / root) - std::atan(K / root));
}

double energy_along_line(double K, double kstar, double fstar, double t) {
  check_admissible_k(K);
  if (!(kstar > 0.0)) fail(errc::admissibility, "K* must be positive", kstar);
  if (!(fstar > 0.0)) fail(errc::admissibility, "F* must be positive", fstar);
  return kstar * (fstar * fstar + K * fstar * t / 2.0 + t * t) *
         std::exp(2.0 * line_exponent(K, fstar, t));
}

std::vector<RiccatiSample> integrate_numerically(double K, double fstar, double t0, double t1,
                                                 int steps) {
  check_admissible_k(K);
  if (!(fstar > 0.0)) fail(errc::admissibility, "F* must be positive", fstar);
  if (steps < 100) fail(errc::config, "at least 100 integration steps required");
  const double a2 = fstar * fstar;
  const double estar = 0.5 * a2;
  auto rhs = [&](double t, double z) {
    return (2.0 - 2.0 * t * z - 0.5 * (a2 - t * t) * z * z) / a2;
  };
  const double h = (t1 - t0) / steps;
  std::vector<RiccatiSample> out;
  out.reserve((size_t)steps + 1);
  double t = t0;
  double z = closed_form_z(K, fstar, estar, t0);
  out.push_back({t, z, rhs(t, z)});
  for (int s = 0; s < steps; ++s) {
    const double k1 = rhs(t, z);
    const double k2 = rhs(t + h / 2, z + h / 2 * k1);
    const double k3 = rhs(t + h / 2, z + h / 2 * k2);
    const double k4 = rhs(t + h, z + h * k3);
    z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t0 + (s + 1) * h;
    if (!(std::abs(z) < 1e12))
      fail(errc::singular_eval, "integration blew up (inadmissible parameters?)", z);
    out.push_back({t, z, rhs(t, z)});
  }
  return out;
}

LineProfileReport extract_line_profile(const MetricSpec& spec, const PolyScalar& alpha,
                                       const std::vector<double>& p, const std::vector<double>& v,
                                       double t0, double t1, int npoints) {
  if (npoints < 2) fail(errc::config, "need at least two grid points");
  const int n = spec.dim;
  const LineContext ctx = line_context(spec, alpha, p, v);

  LineProfileReport rep;
  rep.fstar = ctx.fstar;
  rep.kstar = ctx.e_at_v / (ctx.fstar * ctx.fstar);
  rep.k_measured = ctx.fstar * log_derivative(spec, p, v, ctx.xstar);
  check_admissible_k(rep.k_measured);
  const double estar = 0.5 * ctx.fstar * ctx.fstar;

  for (int s = 0; s < npoints; ++s) {
    const double t = t0 + (t1 - t0) * s / (npoints - 1);
    std::vector<double> y((size_t)n);
    for (int i = 0; i < n; ++i) y[(size_t)i] = v[(size_t)i] + t * ctx.xstar[(size_t)i];
    if (!is_admissible(spec, {p, y})) {
      ++rep.skipped;
      continue;
    }
    const double measured = energy_value(spec, {p, y});
    const double predicted = energy_along_line(rep.k_measured, rep.kstar, ctx.fstar, t);
    rep.profile_residual = std::max(
        rep.profile_residual, std::abs(measured - predicted) / std::max(1e-300, std::abs(predicted)));
    const double z = log_derivative(spec, p, y, ctx.xstar);
    const double zc = closed_form_z(rep.k_measured, ctx.fstar, estar, t);
    rep.logderiv_residual =
        std::max(rep.logderiv_residual, std::abs(z - zc) / (1.0 + std::abs(zc)));
    ++rep.grid;
  }
  if (rep.grid == 0) fail(errc::inadmissible_point, "entire grid inside the excluded cone");
  return rep;
}

ProfileFamilyReport compare_profile_with_family(const MetricSpec& spec, const PolyScalar& alpha,
                                const std::vector<double>& p, const std::vector<double>& v,
                                double t0, double t1, int npoints) {
  if (npoints < 2) fail(errc::config, "need at least two grid points");
  if (spec.base().family != MetricFamily::finsleroid)
    fail(errc::config, "the comparison needs a finsleroid spec");
  const int n = spec.dim;
  const LineContext ctx = line_context(spec, alpha, p, v);

  ProfileFamilyReport rep;
  rep.fstar = ctx.fstar;
  const double g = spec.charge_at(p);
  rep.K = 2.0 * g;
  check_admissible_k(rep.K);
  rep.kstar = ctx.e_at_v / (ctx.fstar * ctx.fstar);
  const double root = std::sqrt(16.0 - rep.K * rep.K);
  const double bigG = 2.0 * rep.K / root;
  const double prefactor = 2.0 * rep.kstar * std::exp(-bigG * std::atan(bigG / 2.0));

  for (int s = 0; s < npoints; ++s) {
    const double t = t0 + (t1 - t0) * s / (npoints - 1);
    std::vector<double> y((size_t)n);
    for (int i = 0; i < n; ++i) y[(size_t)i] = v[(size_t)i] + t * ctx.xstar[(size_t)i];
    ChartPoint c{p, y};
    if (!is_admissible(spec, c)) {
      ++rep.skipped;
      continue;
    }
    const FinsleroidData d = finsleroid_data(spec, c);
    const double quad = d.b * d.b + d.g * d.q * d.b + d.q * d.q;
    const double quad_want = t * t + rep.K / 2.0 * ctx.fstar * t + ctx.fstar * ctx.fstar;
    rep.quadratic_identity = std::max(
        rep.quadratic_identity, std::abs(quad - quad_want) / std::max(1.0, std::abs(quad_want)));
    const double phi_want = std::atan((4.0 * t / ctx.fstar + rep.K) / root);
    rep.phi_identity = std::max(rep.phi_identity, std::abs(d.phi - phi_want));

    const double lhs = energy_along_line(rep.K, rep.kstar, ctx.fstar, t);
    const double rhs = prefactor * 0.5 * std::exp(d.G * d.phi) * quad;
    rep.energy_residual =
        std::max(rep.energy_residual, std::abs(lhs - rhs) / std::max(1e-300, std::abs(lhs)));
    ++rep.grid;
  }
  if (rep.grid == 0) fail(errc::inadmissible_point, "entire grid inside the excluded cone");
  return rep;
}

} // namespace finsler
