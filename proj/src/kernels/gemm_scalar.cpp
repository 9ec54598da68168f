#include "ringtoss/kernels/gemm.hpp"

namespace ringtoss::kernels {

void gemm_scalar(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
                 const double* b, int ldb, double beta, double* c, int ldc) {
  for (int i = 0; i < m; ++i) {
    double* crow = c + static_cast<long>(i) * ldc;
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) {
        const double av = trans_a ? a[static_cast<long>(p) * lda + i] : a[static_cast<long>(i) * lda + p];
        const double bv = trans_b ? b[static_cast<long>(j) * ldb + p] : b[static_cast<long>(p) * ldb + j];
        acc += av * bv;
      }
      crow[j] = beta == 0.0 ? alpha * acc : alpha * acc + beta * crow[j];
    }
  }
}

}  // namespace ringtoss::kernels
