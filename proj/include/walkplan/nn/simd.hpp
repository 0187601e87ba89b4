#pragma once

#include <string_view>

namespace walkplan::nn::simd {

/// Dense kernels behind every convolution and fully-connected layer.
/// All matrices are row-major; results accumulate into C.
struct KernelTable {
  const char* name;
  /// C[M x N] += A[M x K] * B[K x N]
  void (*gemm_nn)(int m, int n, int k, const double* a, int lda, const double* b, int ldb, double* c, int ldc);
  /// C[M x N] += A[M x K] * B[N x K]^T
  void (*gemm_nt)(int m, int n, int k, const double* a, int lda, const double* b, int ldb, double* c, int ldc);
  double (*dot)(int n, const double* x, const double* y);
  /// y += alpha * x
  void (*axpy)(int n, double alpha, const double* x, double* y);
};

const KernelTable& scalar_kernels();
/// AVX2/FMA table, or nullptr when not compiled in or unsupported by this CPU.
const KernelTable* avx2_kernels();

/// Active table. Chosen once from the CPU (overridable through the
/// WALKPLAN_SIMD environment variable: "scalar" or "avx2").
const KernelTable& kernels();
/// Forces a table by name ("scalar", "avx2", "auto"); returns false if unavailable.
bool select_kernels(std::string_view name);

}  // namespace walkplan::nn::simd
