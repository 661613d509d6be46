#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "finsler/jet/kernels.hpp"

namespace finsler {

// Per-group derivative budget for the graded truncation set: exponents alpha over the n
// position variables with |alpha| <= x_cap, beta over the n direction variables with
// |beta| <= y_cap. Spray and Landsberg evaluation consumes one x order; the Berwald mixed
// curvature consumes five y orders, so the defaults are the minimum for a full tensor pack.
struct DegreeCaps {
  int dim = 3;
  int x_cap = 1;
  int y_cap = 5;

  bool operator==(const DegreeCaps&) const = default;
};

// Immutable index tables for one truncation set: the monomial list, rank lookup, and the
// sparse product plan consumed by the kernels. Spaces are canonicalized through get(), so
// jets can compare spaces by pointer.
class JetSpace {
public:
  static std::shared_ptr<const JetSpace> get(const DegreeCaps& caps);

  const DegreeCaps& caps() const { return caps_; }
  int dim() const { return caps_.dim; }
  // number of stored coefficients
  size_t size() const { return n_monomials_; }

  // Exponents of monomial r, laid out as alpha[0..n-1], beta[0..n-1].
  const uint8_t* exponents(size_t r) const { return mono_.data() + r * 2 * caps_.dim; }
  int total_x_degree(size_t r) const { return deg_x_[r]; }
  int total_y_degree(size_t r) const { return deg_y_[r]; }

  // Rank of the given exponent vector, or -1 if outside the truncation set.
  ptrdiff_t rank(const uint8_t* exps) const;
  ptrdiff_t rank(const std::vector<int>& alpha, const std::vector<int>& beta) const;

  // alpha! * beta! for monomial r (the partial-derivative rescale factor).
  double factorial_scale(size_t r) const { return fact_[r]; }

  const jetkern::MulPlan& mul_plan() const { return plan_; }

  // Space with one order less in the given group (for derivatives). Throws on exhausted cap.
  std::shared_ptr<const JetSpace> x_reduced() const;
  std::shared_ptr<const JetSpace> y_reduced() const;

private:
  explicit JetSpace(const DegreeCaps& caps);

  uint64_t pack_key(const uint8_t* exps) const;

  DegreeCaps caps_;
  size_t n_monomials_ = 0;
  std::vector<uint8_t> mono_;     // 2n exponents per monomial, rank 0 is the constant
  std::vector<int> deg_x_, deg_y_;
  std::vector<double> fact_;
  std::unordered_map<uint64_t, uint32_t> rank_;
  std::vector<uint32_t> offsets_, ia_, ib_;
  jetkern::MulPlan plan_;
};

} // namespace finsler
