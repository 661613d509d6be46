// AVX2 variants of the jet coefficient kernels. Contract: bit-identical to jetkern::ref.
// The product pass is vectorized (gather + multiply); the reduction adds the four lane
// products in scalar order so the accumulation sequence matches the reference loop exactly.
#include "finsler/jet/kernels.hpp"

#ifdef FINSLER_HAVE_AVX2

#include <immintrin.h>

namespace finsler::jetkern::avx2 {

void mul(const MulPlan& plan, const double* a, const double* b, double* out) {
  for (size_t k = 0; k < plan.n_out; ++k) {
    const uint32_t begin = plan.offsets[k];
    const uint32_t end = plan.offsets[k + 1];
    double acc = 0.0;
    uint32_t m = begin;
    for (; m + 4 <= end; m += 4) {
      __m128i via = _mm_loadu_si128(reinterpret_cast<const __m128i*>(plan.ia + m));
      __m128i vib = _mm_loadu_si128(reinterpret_cast<const __m128i*>(plan.ib + m));
      __m256d va = _mm256_i32gather_pd(a, via, 8);
      __m256d vb = _mm256_i32gather_pd(b, vib, 8);
      __m256d prod = _mm256_mul_pd(va, vb);
      alignas(32) double lanes[4];
      _mm256_store_pd(lanes, prod);
      acc += lanes[0];
      acc += lanes[1];
      acc += lanes[2];
      acc += lanes[3];
    }
    for (; m < end; ++m) acc += a[plan.ia[m]] * b[plan.ib[m]];
    out[k] = acc;
  }
}

void axpy(double s, const double* x, double* y, size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    // mul then add, not fma: must round exactly like the scalar reference
    vy = _mm256_add_pd(vy, _mm256_mul_pd(vs, vx));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

} // namespace finsler::jetkern::avx2

#endif
