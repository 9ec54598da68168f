#pragma once

#include <string>

namespace ringtoss::kernels {

enum class Isa { Scalar, Avx2, Avx512 };

const char* isa_name(Isa isa);
/// Parses "scalar", "avx2" or "avx512"; throws std::invalid_argument otherwise.
Isa parse_isa(const std::string& name);

/// Whether the running CPU (and this build) can execute the given variant.
bool isa_supported(Isa isa);

/// Variant used by gemm(). Defaults to the widest supported ISA; the
/// RINGTOSS_ISA environment variable (scalar, avx2, avx512) overrides it.
Isa active_isa();
/// Pins the variant for the whole process; throws if unsupported.
void set_active_isa(Isa isa);

/// Row-major C (m x n) = alpha * op(A) * op(B) + beta * C, op(X) = X or X^T.
/// With beta == 0 the prior contents of C are ignored.
/// Each call is deterministic for a fixed ISA and shape.
void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda, const double* b,
          int ldb, double beta, double* c, int ldc);

void gemm_with(Isa isa, bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
               const double* b, int ldb, double beta, double* c, int ldc);

// Individual variants; the SIMD ones are only defined on x86-64 builds.
void gemm_scalar(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
                 const double* b, int ldb, double beta, double* c, int ldc);
void gemm_avx2(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
               const double* b, int ldb, double beta, double* c, int ldc);
void gemm_avx512(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
                 const double* b, int ldb, double beta, double* c, int ldc);

}  // namespace ringtoss::kernels
