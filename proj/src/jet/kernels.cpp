#include "finsler/jet/kernels.hpp"

namespace finsler::jetkern {

namespace ref {

void mul(const MulPlan& plan, const double* a, const double* b, double* out) {
  for (size_t k = 0; k < plan.n_out; ++k) {
    double acc = 0.0;
    const uint32_t end = plan.offsets[k + 1];
    for (uint32_t m = plan.offsets[k]; m < end; ++m) {
      acc += a[plan.ia[m]] * b[plan.ib[m]];
    }
    out[k] = acc;
  }
}

void axpy(double s, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

} // namespace ref

namespace {

struct Dispatch {
  void (*mul)(const MulPlan&, const double*, const double*, double*) = ref::mul;
  void (*axpy)(double, const double*, double*, size_t) = ref::axpy;
  Isa isa = Isa::scalar;
};

bool avx2_supported() {
#ifdef FINSLER_HAVE_AVX2
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Dispatch make_dispatch(Isa want) {
  Dispatch d;
#ifdef FINSLER_HAVE_AVX2
  if (want == Isa::avx2 && avx2_supported()) {
    d.mul = avx2::mul;
    d.axpy = avx2::axpy;
    d.isa = Isa::avx2;
    return d;
  }
#endif
  (void)want;
  return d;
}

Dispatch& dispatch() {
  static Dispatch d = make_dispatch(avx2_supported() ? Isa::avx2 : Isa::scalar);
  return d;
}

} // namespace

Isa active_isa() { return dispatch().isa; }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) { return isa == Isa::scalar || avx2_supported(); }

Isa set_isa(Isa isa) {
  dispatch() = make_dispatch(isa);
  return dispatch().isa;
}

void mul(const MulPlan& plan, const double* a, const double* b, double* out) {
  dispatch().mul(plan, a, b, out);
}

void axpy(double s, const double* x, double* y, size_t n) { dispatch().axpy(s, x, y, n); }

} // namespace finsler::jetkern
