#pragma once

#include <vector>

#include "finsler/jet/jet.hpp"

namespace finsler {

// Polynomial in the position variables with total degree <= 2. Coefficient fields of the
// metric families are restricted to this class so every spec is finite and exactly
// reproducible while still exercising first x-derivatives.
class PolyScalar {
public:
  struct Term {
    std::vector<int> powers; // length n
    double coeff = 0.0;
  };

  PolyScalar() = default;
  PolyScalar(int dim, std::vector<Term> terms);

  static PolyScalar constant(int dim, double value);
  static PolyScalar zero(int dim) { return constant(dim, 0.0); }
  // coordinate function x^i
  static PolyScalar coordinate(int dim, int i);

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const;

  double eval(const std::vector<double>& x) const;
  // exact partial derivative in x^i
  PolyScalar deriv(int i) const;
  // evaluation in jet arithmetic (x variables seeded in `space` at basepoint x)
  Jet eval_jet(const std::shared_ptr<const JetSpace>& space, const std::vector<double>& x) const;

  PolyScalar operator*(double s) const;
  PolyScalar operator+(const PolyScalar& o) const;

private:
  int dim_ = 0;
  std::vector<Term> terms_;
};

} // namespace finsler
