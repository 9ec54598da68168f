#pragma once

// Packed, cache-blocked GEMM driver shared by the SIMD variants. Everything
// here has internal linkage so each ISA-specific translation unit gets its own
// copy compiled with its own target flags.

#include <algorithm>
#include <vector>

namespace ringtoss::kernels {
namespace {

constexpr int kKc = 256;
constexpr int kNc = 2048;

// Panels of MR rows: for each p, MR consecutive values of op(A)(i, p).
template <int MR>
void pack_a(bool trans, const double* a, int lda, int i0, int mc, int p0, int kc, double* out) {
  for (int ir = 0; ir < mc; ir += MR) {
    const int rows = std::min(MR, mc - ir);
    for (int p = 0; p < kc; ++p) {
      for (int r = 0; r < MR; ++r) {
        double v = 0.0;
        if (r < rows) {
          const long i = i0 + ir + r, q = p0 + p;
          v = trans ? a[q * lda + i] : a[i * lda + q];
        }
        *out++ = v;
      }
    }
  }
}

// Panels of NR columns: for each p, NR consecutive values of op(B)(p, j).
template <int NR>
void pack_b(bool trans, const double* b, int ldb, int p0, int kc, int j0, int nc, double* out) {
  for (int jr = 0; jr < nc; jr += NR) {
    const int cols = std::min(NR, nc - jr);
    for (int p = 0; p < kc; ++p) {
      for (int col = 0; col < NR; ++col) {
        double v = 0.0;
        if (col < cols) {
          const long q = p0 + p, j = j0 + jr + col;
          v = trans ? b[j * ldb + q] : b[q * ldb + j];
        }
        *out++ = v;
      }
    }
  }
}

// Micro: void(int kc, const double* a_panel, const double* b_panel, double* tile) with tile MR x NR row-major.
template <int MR, int NR, int MC, typename Micro>
void blocked_gemm(Micro micro, bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a,
                  int lda, const double* b, int ldb, double beta, double* c, int ldc) {
  if (m <= 0 || n <= 0) return;
  if (k <= 0) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        double& cv = c[static_cast<long>(i) * ldc + j];
        cv = beta == 0.0 ? 0.0 : beta * cv;
      }
    }
    return;
  }
  thread_local std::vector<double> a_pack, b_pack;
  a_pack.resize(static_cast<std::size_t>(MC + MR) * kKc);
  b_pack.resize(static_cast<std::size_t>(kNc + NR) * kKc);
  alignas(64) double tile[MR * NR];

  for (int jc = 0; jc < n; jc += kNc) {
    const int nc = std::min(kNc, n - jc);
    for (int pc = 0; pc < k; pc += kKc) {
      const int kc = std::min(kKc, k - pc);
      const double beta_eff = pc == 0 ? beta : 1.0;
      pack_b<NR>(trans_b, b, ldb, pc, kc, jc, nc, b_pack.data());
      for (int ic = 0; ic < m; ic += MC) {
        const int mc = std::min(MC, m - ic);
        pack_a<MR>(trans_a, a, lda, ic, mc, pc, kc, a_pack.data());
        for (int jr = 0; jr < nc; jr += NR) {
          const int cols = std::min(NR, nc - jr);
          const double* bp = b_pack.data() + static_cast<long>(jr / NR) * kc * NR;
          for (int ir = 0; ir < mc; ir += MR) {
            const int rows = std::min(MR, mc - ir);
            const double* ap = a_pack.data() + static_cast<long>(ir / MR) * kc * MR;
            micro(kc, ap, bp, tile);
            for (int r = 0; r < rows; ++r) {
              double* crow = c + static_cast<long>(ic + ir + r) * ldc + jc + jr;
              const double* trow = tile + r * NR;
              if (beta_eff == 0.0) {
                for (int col = 0; col < cols; ++col) crow[col] = alpha * trow[col];
              } else {
                for (int col = 0; col < cols; ++col) crow[col] = alpha * trow[col] + beta_eff * crow[col];
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace ringtoss::kernels
