#include "finsler/jet/jet.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

Jet Jet::constant(std::shared_ptr<const JetSpace> space, double value) {
  Jet j;
  j.space_ = std::move(space);
  j.c_.assign(j.space_->size(), 0.0);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, int var, double value) {
  const int n = space->dim();
  if (var < 0 || var >= 2 * n) fail(errc::config, "variable index outside the 2n chart variables");
  const bool is_x = var < n;
  if (is_x && space->caps().x_cap < 1)
    fail(errc::config, "cannot seed a position variable with x_cap = 0");
  if (!is_x && space->caps().y_cap < 1)
    fail(errc::config, "cannot seed a direction variable with y_cap = 0");
  Jet j = constant(std::move(space), value);
  std::vector<int> alpha(static_cast<size_t>(n), 0), beta(static_cast<size_t>(n), 0);
  if (is_x)
    alpha[static_cast<size_t>(var)] = 1;
  else
    beta[static_cast<size_t>(var - n)] = 1;
  ptrdiff_t r = j.space_->rank(alpha, beta);
  j.c_[static_cast<size_t>(r)] = 1.0;
  return j;
}

void Jet::require_same_space(const Jet& o) const {
  if (space_.get() != o.space_.get())
    fail(errc::config, "jet operands live in different truncation spaces");
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& v : out.c_) v = -v;
  return out;
}

Jet Jet::operator+(const Jet& o) const {
  Jet out = *this;
  out += o;
  return out;
}

Jet Jet::operator-(const Jet& o) const {
  Jet out = *this;
  out -= o;
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  require_same_space(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same_space(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet Jet::operator*(const Jet& o) const {
  require_same_space(o);
  Jet out;
  out.space_ = space_;
  out.c_.resize(c_.size());
  jetkern::mul(space_->mul_plan(), c_.data(), o.c_.data(), out.c_.data());
  return out;
}

Jet Jet::operator+(double s) const {
  Jet out = *this;
  out.c_[0] += s;
  return out;
}

Jet Jet::operator*(double s) const {
  Jet out = *this;
  for (double& v : out.c_) v *= s;
  return out;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

double Jet::partial(const std::vector<int>& alpha, const std::vector<int>& beta) const {
  ptrdiff_t r = space_->rank(alpha, beta);
  if (r < 0) fail(errc::order_budget, "multi-index outside the truncation set");
  return space_->factorial_scale(static_cast<size_t>(r)) * c_[static_cast<size_t>(r)];
}

double Jet::partial_y(std::initializer_list<int> ys) const {
  const int n = space_->dim();
  std::vector<int> alpha(static_cast<size_t>(n), 0), beta(static_cast<size_t>(n), 0);
  for (int i : ys) {
    if (i < 0 || i >= n) fail(errc::config, "y index out of range");
    ++beta[static_cast<size_t>(i)];
  }
  return partial(alpha, beta);
}

Jet Jet::deriv_x(int i) const {
  const int n = space_->dim();
  if (i < 0 || i >= n) fail(errc::config, "x index out of range");
  auto reduced = space_->x_reduced();
  Jet out;
  out.space_ = reduced;
  out.c_.assign(reduced->size(), 0.0);
  std::vector<uint8_t> exps(2 * static_cast<size_t>(n));
  for (size_t r = 0; r < reduced->size(); ++r) {
    const uint8_t* m = reduced->exponents(r);
    for (size_t k = 0; k < 2 * static_cast<size_t>(n); ++k) exps[k] = m[k];
    exps[static_cast<size_t>(i)] += 1;
    ptrdiff_t src = space_->rank(exps.data());
    out.c_[r] = c_[static_cast<size_t>(src)] * static_cast<double>(exps[static_cast<size_t>(i)]);
  }
  return out;
}

Jet Jet::deriv_y(int i) const {
  const int n = space_->dim();
  if (i < 0 || i >= n) fail(errc::config, "y index out of range");
  auto reduced = space_->y_reduced();
  Jet out;
  out.space_ = reduced;
  out.c_.assign(reduced->size(), 0.0);
  std::vector<uint8_t> exps(2 * static_cast<size_t>(n));
  for (size_t r = 0; r < reduced->size(); ++r) {
    const uint8_t* m = reduced->exponents(r);
    for (size_t k = 0; k < 2 * static_cast<size_t>(n); ++k) exps[k] = m[k];
    exps[static_cast<size_t>(n + i)] += 1;
    ptrdiff_t src = space_->rank(exps.data());
    out.c_[r] =
        c_[static_cast<size_t>(src)] * static_cast<double>(exps[static_cast<size_t>(n + i)]);
  }
  return out;
}

Jet Jet::truncated(const std::shared_ptr<const JetSpace>& to) const {
  if (to.get() == space_.get()) return *this;
  if (to->dim() != space_->dim()) fail(errc::config, "truncation cannot change the dimension");
  if (to->caps().x_cap > space_->caps().x_cap || to->caps().y_cap > space_->caps().y_cap)
    fail(errc::order_budget, "truncation target has larger caps than the source");
  Jet out;
  out.space_ = to;
  out.c_.resize(to->size());
  for (size_t r = 0; r < to->size(); ++r) {
    ptrdiff_t src = space_->rank(to->exponents(r));
    out.c_[r] = c_[static_cast<size_t>(src)];
  }
  return out;
}

double Jet::max_abs_coeff() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// f(u) via the univariate Taylor expansion of f at u0 composed with w = u - u0 (nilpotent
// within the truncation set). coeffs[k] = f^(k)(u0)/k!, Horner over jets.
Jet compose_series(const Jet& u, const std::vector<double>& coeffs) {
  Jet w = u;
  w += -u.value();
  Jet acc = Jet::constant(u.space(), coeffs.back());
  for (size_t k = coeffs.size() - 1; k-- > 0;) {
    acc = acc * w;
    acc += coeffs[k];
  }
  return acc;
}

int series_order(const Jet& u) { return u.space()->caps().x_cap + u.space()->caps().y_cap; }

} // namespace

Jet exp(const Jet& u) {
  const int d = series_order(u);
  std::vector<double> c(static_cast<size_t>(d) + 1);
  c[0] = std::exp(u.value());
  for (int k = 1; k <= d; ++k) c[static_cast<size_t>(k)] = c[static_cast<size_t>(k - 1)] / k;
  return compose_series(u, c);
}

Jet log(const Jet& u) {
  const double u0 = u.value();
  if (!(u0 > 0.0)) fail(errc::singular_eval, "log of a jet with non-positive constant term", u0);
  const int d = series_order(u);
  std::vector<double> c(static_cast<size_t>(d) + 1);
  c[0] = std::log(u0);
  double p = 1.0; // (-1)^(k-1) / u0^k
  for (int k = 1; k <= d; ++k) {
    p /= u0;
    c[static_cast<size_t>(k)] = (k % 2 == 1 ? p : -p) / k;
  }
  return compose_series(u, c);
}

Jet sqrt(const Jet& u) {
  const double u0 = u.value();
  if (!(u0 > 0.0)) fail(errc::singular_eval, "sqrt of a jet with non-positive constant term", u0);
  const int d = series_order(u);
  std::vector<double> c(static_cast<size_t>(d) + 1);
  c[0] = std::sqrt(u0);
  // binom(1/2, k) * u0^(1/2 - k)
  double binom = 1.0;
  double power = c[0];
  for (int k = 1; k <= d; ++k) {
    binom *= (0.5 - (k - 1)) / k;
    power /= u0;
    c[static_cast<size_t>(k)] = binom * power;
  }
  return compose_series(u, c);
}

Jet arctan(const Jet& u) {
  const double u0 = u.value();
  const int d = series_order(u);
  // Taylor coefficients of 1/(1+t^2) at u0 from (1 + u0^2 + 2 u0 w + w^2) d(w) = 1,
  // then integrate termwise.
  const double den = 1.0 + u0 * u0;
  std::vector<double> dd(static_cast<size_t>(d) + 1, 0.0);
  dd[0] = 1.0 / den;
  for (int k = 1; k <= d; ++k) {
    double v = -2.0 * u0 * dd[static_cast<size_t>(k - 1)];
    if (k >= 2) v -= dd[static_cast<size_t>(k - 2)];
    dd[static_cast<size_t>(k)] = v / den;
  }
  std::vector<double> c(static_cast<size_t>(d) + 1);
  c[0] = std::atan(u0);
  for (int k = 1; k <= d; ++k) c[static_cast<size_t>(k)] = dd[static_cast<size_t>(k - 1)] / k;
  return compose_series(u, c);
}

Jet pow(const Jet& u, double r) {
  const double u0 = u.value();
  const bool integral = r == std::floor(r) && std::abs(r) < 64.0;
  if (integral) {
    // exact repeated multiplication; no constant-term restriction for non-negative powers
    const long e = std::lround(std::abs(r));
    Jet acc = Jet::constant(u.space(), 1.0);
    for (long k = 0; k < e; ++k) acc = acc * u;
    if (r < 0.0) return acc.reciprocal();
    return acc;
  }
  if (!(u0 > 0.0))
    fail(errc::singular_eval, "non-integer power of a jet with non-positive constant term", u0);
  const int d = series_order(u);
  std::vector<double> c(static_cast<size_t>(d) + 1);
  // binom(r, k) * u0^(r - k)
  c[0] = std::pow(u0, r);
  double binom = 1.0;
  double power = c[0];
  for (int k = 1; k <= d; ++k) {
    binom *= (r - (k - 1)) / k;
    power /= u0;
    c[static_cast<size_t>(k)] = binom * power;
  }
  return compose_series(u, c);
}

Jet Jet::reciprocal() const {
  const double u0 = value();
  if (u0 == 0.0 || !std::isfinite(u0))
    fail(errc::singular_eval, "reciprocal of a jet with zero constant term", u0);
  const int d = series_order(*this);
  std::vector<double> c(static_cast<size_t>(d) + 1);
  double p = 1.0 / u0;
  c[0] = p;
  for (int k = 1; k <= d; ++k) {
    p = -p / u0;
    c[static_cast<size_t>(k)] = p;
  }
  return compose_series(*this, c);
}

} // namespace finsler
