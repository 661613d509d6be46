#pragma once

#include <cstddef>
#include <cstdint>

// Coefficient-array kernels behind jet arithmetic. A scalar reference implementation is the
// semantic contract; SIMD variants are selected at runtime and must produce bit-identical
// results (each product rounded once, accumulation order equal to the scalar loop). The
// project builds with -ffp-contract=off so the reference itself cannot silently fuse.
namespace finsler::jetkern {

// Sparse product plan for one graded truncation set: out[k] accumulates a[ia[m]] * b[ib[m]]
// for m in [offsets[k], offsets[k+1]).
struct MulPlan {
  const uint32_t* offsets = nullptr; // n_out + 1 entries
  const uint32_t* ia = nullptr;
  const uint32_t* ib = nullptr;
  size_t n_out = 0;
};

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);
// Force a specific path (tests use this to compare variants). Requesting an unsupported ISA
// falls back to scalar and returns the ISA actually selected.
Isa set_isa(Isa isa);
bool isa_supported(Isa isa);

void mul(const MulPlan& plan, const double* a, const double* b, double* out);
// y[i] += s * x[i]
void axpy(double s, const double* x, double* y, size_t n);

// Reference implementations (always available; the dispatch targets must match them bitwise).
namespace ref {
void mul(const MulPlan& plan, const double* a, const double* b, double* out);
void axpy(double s, const double* x, double* y, size_t n);
} // namespace ref

#ifdef FINSLER_HAVE_AVX2
namespace avx2 {
void mul(const MulPlan& plan, const double* a, const double* b, double* out);
void axpy(double s, const double* x, double* y, size_t n);
} // namespace avx2
#endif

} // namespace finsler::jetkern
