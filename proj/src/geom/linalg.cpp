#include "finsler/geom/linalg.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler::linalg {

std::vector<double> cholesky(const std::vector<double>& a, int n, const char* what) {
  std::vector<double> l(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= l[static_cast<size_t>(i) * n + k] * l[static_cast<size_t>(j) * n + k];
      if (i == j) {
        if (!(s > 0.0)) fail(errc::convexity_failure, what, s);
        l[static_cast<size_t>(i) * n + j] = std::sqrt(s);
      } else {
        l[static_cast<size_t>(i) * n + j] = s / l[static_cast<size_t>(j) * n + j];
      }
    }
  }
  return l;
}

bool is_positive_definite(const std::vector<double>& a, int n) {
  try {
    cholesky(a, n, "matrix is not positive definite");
    return true;
  } catch (const error&) {
    return false;
  }
}

std::vector<double> spd_inverse(const std::vector<double>& a, int n, const char* what) {
  const std::vector<double> l = cholesky(a, n, what);
  std::vector<double> inv(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> col(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) {
    // forward substitution L z = e_c
    for (int i = 0; i < n; ++i) {
      double s = i == c ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= l[static_cast<size_t>(i) * n + k] * col[static_cast<size_t>(k)];
      col[static_cast<size_t>(i)] = s / l[static_cast<size_t>(i) * n + i];
    }
    // backward substitution L^T w = z
    for (int i = n - 1; i >= 0; --i) {
      double s = col[static_cast<size_t>(i)];
      for (int k = i + 1; k < n; ++k)
        s -= l[static_cast<size_t>(k) * n + i] * inv[static_cast<size_t>(k) * n + c];
      inv[static_cast<size_t>(i) * n + c] = s / l[static_cast<size_t>(i) * n + i];
    }
  }
  return inv;
}

double quadratic_form(const std::vector<double>& a, const std::vector<double>& u,
                      const std::vector<double>& v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s += a[static_cast<size_t>(i) * n + j] * u[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
  return s;
}

double det(std::vector<double> a, int n) {
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[static_cast<size_t>(r) * n + c]) >
          std::abs(a[static_cast<size_t>(pivot) * n + c]))
        pivot = r;
    if (a[static_cast<size_t>(pivot) * n + c] == 0.0) return 0.0;
    if (pivot != c) {
      for (int k = 0; k < n; ++k)
        std::swap(a[static_cast<size_t>(pivot) * n + k], a[static_cast<size_t>(c) * n + k]);
      d = -d;
    }
    const double p = a[static_cast<size_t>(c) * n + c];
    d *= p;
    for (int r = c + 1; r < n; ++r) {
      const double f = a[static_cast<size_t>(r) * n + c] / p;
      for (int k = c; k < n; ++k)
        a[static_cast<size_t>(r) * n + k] -= f * a[static_cast<size_t>(c) * n + k];
    }
  }
  return d;
}

std::vector<Jet> jet_inverse(const std::vector<Jet>& a, int n) {
  std::vector<Jet> m = a;
  auto space = a[0].space();
  std::vector<Jet> inv(static_cast<size_t>(n) * n, Jet::constant(space, 0.0));
  for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i) * n + i] = Jet::constant(space, 1.0);

  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[static_cast<size_t>(r) * n + c].value()) >
          std::abs(m[static_cast<size_t>(pivot) * n + c].value()))
        pivot = r;
    if (m[static_cast<size_t>(pivot) * n + c].value() == 0.0)
      fail(errc::singular_eval, "jet matrix is singular at the base point");
    if (pivot != c) {
      for (int k = 0; k < n; ++k) {
        std::swap(m[static_cast<size_t>(pivot) * n + k], m[static_cast<size_t>(c) * n + k]);
        std::swap(inv[static_cast<size_t>(pivot) * n + k], inv[static_cast<size_t>(c) * n + k]);
      }
    }
    const Jet pinv = m[static_cast<size_t>(c) * n + c].reciprocal();
    for (int k = 0; k < n; ++k) {
      m[static_cast<size_t>(c) * n + k] *= pinv;
      inv[static_cast<size_t>(c) * n + k] *= pinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const Jet f = m[static_cast<size_t>(r) * n + c];
      if (f.max_abs_coeff() == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        m[static_cast<size_t>(r) * n + k] -= f * m[static_cast<size_t>(c) * n + k];
        inv[static_cast<size_t>(r) * n + k] -= f * inv[static_cast<size_t>(c) * n + k];
      }
    }
  }
  return inv;
}

} // namespace finsler::linalg
