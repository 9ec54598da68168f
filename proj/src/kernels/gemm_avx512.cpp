#include "ringtoss/kernels/gemm.hpp"

#if defined(RINGTOSS_X86)
#include <immintrin.h>

#include "blocked_gemm.hpp"

namespace ringtoss::kernels {
namespace {

constexpr int kMr = 12;
constexpr int kNr = 16;

void micro_12x16(int kc, const double* a, const double* b, double* tile) {
  __m512d acc[kMr][2];
  for (int r = 0; r < kMr; ++r) acc[r][0] = acc[r][1] = _mm512_setzero_pd();
  for (int p = 0; p < kc; ++p) {
    const __m512d b0 = _mm512_loadu_pd(b);
    const __m512d b1 = _mm512_loadu_pd(b + 8);
#pragma GCC unroll 12
    for (int r = 0; r < kMr; ++r) {
      const __m512d av = _mm512_set1_pd(a[r]);
      acc[r][0] = _mm512_fmadd_pd(av, b0, acc[r][0]);
      acc[r][1] = _mm512_fmadd_pd(av, b1, acc[r][1]);
    }
    a += kMr;
    b += kNr;
  }
  for (int r = 0; r < kMr; ++r) {
    _mm512_store_pd(tile + r * kNr, acc[r][0]);
    _mm512_store_pd(tile + r * kNr + 8, acc[r][1]);
  }
}

}  // namespace

void gemm_avx512(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
                 const double* b, int ldb, double beta, double* c, int ldc) {
  blocked_gemm<kMr, kNr, kMr * 8>(micro_12x16, trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

}  // namespace ringtoss::kernels
#endif
