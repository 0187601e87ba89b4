#include "walkplan/nn/simd.hpp"

namespace walkplan::nn::simd {

namespace {

void gemm_nn(int m, int n, int k, const double* a, int lda, const double* b, int ldb, double* c, int ldc) {
  for (int i = 0; i < m; ++i) {
    double* crow = c + static_cast<long>(i) * ldc;
    for (int p = 0; p < k; ++p) {
      const double av = a[static_cast<long>(i) * lda + p];
      if (av == 0.0) continue;
      const double* brow = b + static_cast<long>(p) * ldb;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

double dot(int n, const double* x, const double* y) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void gemm_nt(int m, int n, int k, const double* a, int lda, const double* b, int ldb, double* c, int ldc) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      c[static_cast<long>(i) * ldc + j] += dot(k, a + static_cast<long>(i) * lda, b + static_cast<long>(j) * ldb);
}

void axpy(int n, double alpha, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", gemm_nn, gemm_nt, dot, axpy};
  return table;
}

}  // namespace walkplan::nn::simd
