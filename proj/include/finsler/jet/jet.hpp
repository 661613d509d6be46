#pragma once

#include <memory>
#include <vector>

#include "finsler/jet/space.hpp"

namespace finsler {

// Truncated multivariate Taylor expansion over the 2n chart variables (x^1..x^n, y^1..y^n)
// at a point, with independent degree caps per group. Values are immutable in practice:
// every operation returns a fresh jet, so concurrent evaluation at distinct points is safe.
//
// Coefficients are stored for the full graded truncation set; partial(alpha, beta) returns
// the true mixed partial derivative (factorial rescale applied).
class Jet {
public:
  Jet() = default;

  static Jet constant(std::shared_ptr<const JetSpace> space, double value);
  // var in [0, n) seeds x^var, var in [n, 2n) seeds y^(var-n).
  static Jet variable(std::shared_ptr<const JetSpace> space, int var, double value);

  const std::shared_ptr<const JetSpace>& space() const { return space_; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  const std::vector<double>& coefficients() const { return c_; }
  double& coeff(size_t r) { return c_[r]; }
  double coeff(size_t r) const { return c_[r]; }

  Jet operator-() const;
  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator/(const Jet& o) const { return *this * o.reciprocal(); }
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o) { return *this = *this * o; }

  Jet operator+(double s) const;
  Jet operator-(double s) const { return *this + (-s); }
  Jet operator*(double s) const;
  Jet operator/(double s) const { return *this * (1.0 / s); }
  Jet& operator+=(double s);
  Jet& operator*=(double s);

  // True partial derivative at the base point for the multi-index (alpha, beta).
  double partial(const std::vector<int>& alpha, const std::vector<int>& beta) const;
  // Pure y-partial, one order per listed variable (repeats allowed).
  double partial_y(std::initializer_list<int> ys) const;

  // Jet of the first derivative, living in the reduced space.
  Jet deriv_x(int i) const;
  Jet deriv_y(int i) const;

  // Copy into a space with smaller (or equal) caps, dropping out-of-set coefficients.
  Jet truncated(const std::shared_ptr<const JetSpace>& to) const;

  Jet reciprocal() const;

  double max_abs_coeff() const;

private:
  void require_same_space(const Jet& o) const;

  std::shared_ptr<const JetSpace> space_;
  std::vector<double> c_;
};

inline Jet operator+(double s, const Jet& j) { return j + s; }
inline Jet operator-(double s, const Jet& j) { return -j + s; }
inline Jet operator*(double s, const Jet& j) { return j * s; }
inline Jet operator/(double s, const Jet& j) { return j.reciprocal() * s; }

// Elementary compositions through the truncation order. Domain of the constant term is
// checked and violations throw errc::singular_eval carrying the offending value.
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sqrt(const Jet& u);
Jet arctan(const Jet& u);
Jet pow(const Jet& u, double r);

} // namespace finsler
