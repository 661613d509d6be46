#include "finsler/geom/energy.hpp"

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/geom/linalg.hpp"

namespace finsler {

namespace {

void check_slit(const ChartPoint& p) {
  double n2 = 0.0;
  for (double v : p.y) n2 += v * v;
  if (n2 == 0.0) fail(errc::slit_violation, "energy is undefined at y = 0");
}

double finsleroid_energy_scalar(const FinsleroidData& d) {
  return 0.5 * std::exp(d.G * d.phi) * (d.b * d.b + d.g * d.q * d.b + d.q * d.q);
}

} // namespace

FinsleroidData finsleroid_data(const MetricSpec& spec, const ChartPoint& p) {
  const MetricSpec& s = spec.base();
  if (s.family != MetricFamily::finsleroid)
    fail(errc::config, "finsleroid data requested for a non-finsleroid spec");
  check_slit(p);

  FinsleroidData d;
  d.a = s.a_at(p.x);
  d.b_low = s.b_at(p.x);
  d.g = s.charge_at(p.x);
  const int n = s.dim;

  d.b = 0.0;
  for (int i = 0; i < n; ++i) d.b += d.b_low[static_cast<size_t>(i)] * p.y[static_cast<size_t>(i)];
  d.ayy = linalg::quadratic_form(d.a, p.y, p.y, n);
  const double q2 = d.ayy - d.b * d.b;
  d.q = q2 > 0.0 ? std::sqrt(q2) : 0.0;
  const double guard = kAxisGuardFraction * std::sqrt(d.ayy);
  if (!(d.q > guard))
    fail(errc::axis_singularity, "point lies inside the excluded cone around the finsleroid axis",
         d.q);

  d.h = std::sqrt(1.0 - d.g * d.g / 4.0);
  d.G = d.g / d.h;
  d.phi = std::atan((2.0 * d.b + d.g * d.q) / (2.0 * d.h * d.q));

  d.a_inv = linalg::spd_inverse(d.a, n, "a_ij not positive definite");
  d.b_up.assign(static_cast<size_t>(n), 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      d.b_up[static_cast<size_t>(l)] +=
          d.a_inv[static_cast<size_t>(l) * n + k] * d.b_low[static_cast<size_t>(k)];
  d.v_up.assign(static_cast<size_t>(n), 0.0);
  for (int l = 0; l < n; ++l)
    d.v_up[static_cast<size_t>(l)] =
        p.y[static_cast<size_t>(l)] - d.b * d.b_up[static_cast<size_t>(l)];
  return d;
}

double energy_value(const MetricSpec& spec, const ChartPoint& p) {
  check_slit(p);
  switch (spec.family) {
    case MetricFamily::riemannian: {
      const std::vector<double> a = spec.a_at(p.x);
      return 0.5 * linalg::quadratic_form(a, p.y, p.y, spec.dim);
    }
    case MetricFamily::finsleroid: {
      return finsleroid_energy_scalar(finsleroid_data(spec, p));
    }
    case MetricFamily::conformal: {
      return std::exp(2.0 * spec.alpha.eval(p.x)) * energy_value(*spec.inner, p);
    }
  }
  fail(errc::config, "unknown metric family");
}

Jet energy_jet(const MetricSpec& spec, const ChartPoint& p, const DegreeCaps& caps) {
  check_slit(p);
  if (caps.dim != spec.dim) fail(errc::config, "caps dimension does not match the spec");
  auto space = JetSpace::get(caps);
  const int n = spec.dim;

  switch (spec.family) {
    case MetricFamily::riemannian: {
      (void)spec.a_at(p.x); // positivity check at the point
      Jet e = Jet::constant(space, 0.0);
      for (int i = 0; i < n; ++i) {
        Jet yi = Jet::variable(space, n + i, p.y[static_cast<size_t>(i)]);
        for (int k = 0; k < n; ++k) {
          Jet yk = Jet::variable(space, n + k, p.y[static_cast<size_t>(k)]);
          e += spec.a[static_cast<size_t>(i) * n + k].eval_jet(space, p.x) * yi * yk;
        }
      }
      return e * 0.5;
    }
    case MetricFamily::finsleroid: {
      // scalar pass validates the point and fixes normalization data
      const FinsleroidData d = finsleroid_data(spec, p);

      std::vector<Jet> yj;
      yj.reserve(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i)
        yj.push_back(Jet::variable(space, n + i, p.y[static_cast<size_t>(i)]));

      // axis 1-form as jets, normalized per point when requested
      std::vector<Jet> bj;
      bj.reserve(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) bj.push_back(spec.b[static_cast<size_t>(i)].eval_jet(space, p.x));
      if (spec.auto_normalize_axis) {
        std::vector<Jet> aj(static_cast<size_t>(n) * n, Jet::constant(space, 0.0));
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            aj[static_cast<size_t>(i) * n + k] =
                spec.a[static_cast<size_t>(i) * n + k].eval_jet(space, p.x);
        const std::vector<Jet> ainv = linalg::jet_inverse(aj, n);
        Jet norm2 = Jet::constant(space, 0.0);
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            norm2 += ainv[static_cast<size_t>(i) * n + k] * bj[static_cast<size_t>(i)] *
                     bj[static_cast<size_t>(k)];
        const Jet scale = sqrt(norm2).reciprocal();
        for (int i = 0; i < n; ++i) bj[static_cast<size_t>(i)] *= scale;
      }

      Jet b = Jet::constant(space, 0.0);
      for (int i = 0; i < n; ++i) b += bj[static_cast<size_t>(i)] * yj[static_cast<size_t>(i)];

      Jet ayy = Jet::constant(space, 0.0);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          ayy += spec.a[static_cast<size_t>(i) * n + k].eval_jet(space, p.x) *
                 yj[static_cast<size_t>(i)] * yj[static_cast<size_t>(k)];

      Jet g = spec.charge.eval_jet(space, p.x);
      Jet h = sqrt(-(g * g) * 0.25 + 1.0);
      Jet bigG = g * h.reciprocal();
      Jet q = sqrt(ayy - b * b);
      Jet phi = arctan((b * 2.0 + g * q) * (h * q * 2.0).reciprocal());
      Jet e = exp(bigG * phi) * (b * b + g * q * b + q * q) * 0.5;
      if (!(e.value() > 0.0))
        fail(errc::convexity_failure, "finsleroid energy not positive at the point", e.value());
      return e;
    }
    case MetricFamily::conformal: {
      Jet inner = energy_jet(*spec.inner, p, caps);
      Jet a2 = spec.alpha.eval_jet(space, p.x) * 2.0;
      return exp(a2) * inner;
    }
  }
  fail(errc::config, "unknown metric family");
}

PhiReport phi_forms_agree(const MetricSpec& spec, const ChartPoint& p) {
  const FinsleroidData d = finsleroid_data(spec, p);
  PhiReport r;
  r.phi = d.phi;
  r.branch = d.b > 0.0 ? 1 : (d.b < 0.0 ? -1 : 0);
  const double half_pi = std::asin(1.0);
  if (r.branch != 0) {
    const double piecewise = (r.branch > 0 ? half_pi : -half_pi) + std::atan(d.G / 2.0) -
                             std::atan((d.q + 0.5 * d.g * d.b) / (d.h * d.b));
    r.branch_residual = std::abs(piecewise - d.phi);
  }

  // staged b -> 0 probe: y' = q0 * (unit transverse direction) + limit_b * b^l.
  // dPhi/db ~ h/q near b = 0, so q0 must dominate h/|limit_b| for a tight bound.
  r.limit_b = 1e-6;
  const double q0 = 200.0;
  const int n = spec.dim;
  // transverse part of the current y, a-orthogonal to the axis: v^l has b_l v^l = 0
  double vnorm2 = linalg::quadratic_form(d.a, d.v_up, d.v_up, n);
  if (!(vnorm2 > 0.0)) fail(errc::axis_singularity, "cannot build a transverse direction", vnorm2);
  std::vector<double> yprobe(static_cast<size_t>(n));
  for (int l = 0; l < n; ++l)
    yprobe[static_cast<size_t>(l)] = q0 * d.v_up[static_cast<size_t>(l)] / std::sqrt(vnorm2) +
                                     r.limit_b * d.b_up[static_cast<size_t>(l)];
  const FinsleroidData dl = finsleroid_data(spec, {p.x, yprobe});
  r.limit_error = std::abs(dl.phi - std::atan(dl.G / 2.0));
  return r;
}

void check_admissible(const MetricSpec& spec, const ChartPoint& p) {
  check_slit(p);
  const MetricSpec& s = spec.base();
  (void)s.a_at(p.x);
  if (s.family == MetricFamily::finsleroid) {
    const FinsleroidData d = finsleroid_data(spec, p);
    // cone exclusion is stricter than the bare q guard
    if (d.q < kAxisConeSine * std::sqrt(d.ayy))
      fail(errc::axis_singularity, "point inside the excluded axis cone", d.q);
  }
}

bool is_admissible(const MetricSpec& spec, const ChartPoint& p) {
  try {
    check_admissible(spec, p);
    return true;
  } catch (const error&) {
    return false;
  }
}

} // namespace finsler
