#pragma once

#include <vector>

#include "finsler/jet/jet.hpp"

// Dense helpers for the small (n <= 8) matrices this project works with.
namespace finsler::linalg {

// Cholesky factor of a symmetric positive definite matrix (row-major). Throws
// errc::convexity_failure when a pivot is not positive.
std::vector<double> cholesky(const std::vector<double>& a, int n, const char* what);

bool is_positive_definite(const std::vector<double>& a, int n);

// Inverse of a symmetric positive definite matrix via its Cholesky factor.
std::vector<double> spd_inverse(const std::vector<double>& a, int n, const char* what);

double quadratic_form(const std::vector<double>& a, const std::vector<double>& u,
                      const std::vector<double>& v, int n);

double det(std::vector<double> a, int n);

// Inverse of a jet-valued matrix by Gaussian elimination with partial pivoting on the
// constant terms; division is reciprocal composition, so the result carries the full
// derivative structure of the inverse.
std::vector<Jet> jet_inverse(const std::vector<Jet>& a, int n);

} // namespace finsler::linalg
