#include "finsler/geom/poly.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

PolyScalar::PolyScalar(int dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
  if (dim < 1) fail(errc::schema, "polynomial dimension must be positive");
  for (const Term& t : terms_) {
    if (static_cast<int>(t.powers.size()) != dim)
      fail(errc::schema, "polynomial exponent vector length must equal the dimension");
    int deg = 0;
    for (int e : t.powers) {
      if (e < 0) fail(errc::schema, "polynomial exponents must be nonnegative");
      deg += e;
    }
    if (deg > 2) fail(errc::schema, "coefficient polynomials are restricted to degree <= 2");
    if (!std::isfinite(t.coeff)) fail(errc::schema, "polynomial coefficient must be finite");
  }
}

PolyScalar PolyScalar::constant(int dim, double value) {
  if (value == 0.0) return PolyScalar(dim, {});
  return PolyScalar(dim, {Term{std::vector<int>(static_cast<size_t>(dim), 0), value}});
}

PolyScalar PolyScalar::coordinate(int dim, int i) {
  std::vector<int> p(static_cast<size_t>(dim), 0);
  p[static_cast<size_t>(i)] = 1;
  return PolyScalar(dim, {Term{std::move(p), 1.0}});
}

bool PolyScalar::is_zero() const {
  for (const Term& t : terms_)
    if (t.coeff != 0.0) return false;
  return true;
}

double PolyScalar::eval(const std::vector<double>& x) const {
  double sum = 0.0;
  for (const Term& t : terms_) {
    double v = t.coeff;
    for (int i = 0; i < dim_; ++i)
      for (int e = 0; e < t.powers[static_cast<size_t>(i)]; ++e) v *= x[static_cast<size_t>(i)];
    sum += v;
  }
  return sum;
}

PolyScalar PolyScalar::deriv(int i) const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    const int e = t.powers[static_cast<size_t>(i)];
    if (e == 0) continue;
    Term d = t;
    d.coeff *= e;
    d.powers[static_cast<size_t>(i)] -= 1;
    out.push_back(std::move(d));
  }
  return PolyScalar(dim_, std::move(out));
}

Jet PolyScalar::eval_jet(const std::shared_ptr<const JetSpace>& space,
                         const std::vector<double>& x) const {
  // with no x budget the position dependence is invisible to the truncation
  if (space->caps().x_cap == 0) return Jet::constant(space, eval(x));
  Jet sum = Jet::constant(space, 0.0);
  for (const Term& t : terms_) {
    Jet v = Jet::constant(space, t.coeff);
    for (int i = 0; i < dim_; ++i)
      for (int e = 0; e < t.powers[static_cast<size_t>(i)]; ++e)
        v = v * Jet::variable(space, i, x[static_cast<size_t>(i)]);
    sum += v;
  }
  return sum;
}

PolyScalar PolyScalar::operator*(double s) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.coeff *= s;
  return PolyScalar(dim_, std::move(out));
}

PolyScalar PolyScalar::operator+(const PolyScalar& o) const {
  std::vector<Term> out = terms_;
  out.insert(out.end(), o.terms_.begin(), o.terms_.end());
  return PolyScalar(dim_, std::move(out));
}

} // namespace finsler
