// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "walkplan/nn/simd.hpp"

namespace walkplan::nn::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

/// 4 x 8 register tile of C += A * B.
inline void tile_4x8(int k, const double* a, int lda, const double* b, int ldb, double* c, int ldc) {
  __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
  __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
  __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
  __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
  const double* a0 = a;
  const double* a1 = a + lda;
  const double* a2 = a + 2L * lda;
  const double* a3 = a + 3L * lda;
  for (int p = 0; p < k; ++p) {
    const double* brow = b + static_cast<long>(p) * ldb;
    const __m256d b0 = _mm256_loadu_pd(brow);
    const __m256d b1 = _mm256_loadu_pd(brow + 4);
    __m256d av = _mm256_broadcast_sd(a0 + p);
    c00 = _mm256_fmadd_pd(av, b0, c00);
    c01 = _mm256_fmadd_pd(av, b1, c01);
    av = _mm256_broadcast_sd(a1 + p);
    c10 = _mm256_fmadd_pd(av, b0, c10);
    c11 = _mm256_fmadd_pd(av, b1, c11);
    av = _mm256_broadcast_sd(a2 + p);
    c20 = _mm256_fmadd_pd(av, b0, c20);
    c21 = _mm256_fmadd_pd(av, b1, c21);
    av = _mm256_broadcast_sd(a3 + p);
    c30 = _mm256_fmadd_pd(av, b0, c30);
    c31 = _mm256_fmadd_pd(av, b1, c31);
  }
  auto store = [](double* dst, __m256d lo, __m256d hi) {
    _mm256_storeu_pd(dst, _mm256_add_pd(_mm256_loadu_pd(dst), lo));
    _mm256_storeu_pd(dst + 4, _mm256_add_pd(_mm256_loadu_pd(dst + 4), hi));
  };
  store(c, c00, c01);
  store(c + ldc, c10, c11);
  store(c + 2L * ldc, c20, c21);
  store(c + 3L * ldc, c30, c31);
}

/// 1 x 4 tile.
inline void tile_1x4(int k, const double* a, const double* b, int ldb, double* c) {
  __m256d acc = _mm256_setzero_pd();
  for (int p = 0; p < k; ++p) acc = _mm256_fmadd_pd(_mm256_broadcast_sd(a + p), _mm256_loadu_pd(b + static_cast<long>(p) * ldb), acc);
  _mm256_storeu_pd(c, _mm256_add_pd(_mm256_loadu_pd(c), acc));
}

inline void tile_1x1(int k, const double* a, const double* b, int ldb, double* c) {
  double acc = 0.0;
  for (int p = 0; p < k; ++p) acc += a[p] * b[static_cast<long>(p) * ldb];
  *c += acc;
}

void gemm_nn(int m, int n, int k, const double* a, int lda, const double* b, int ldb, double* c, int ldc) {
  constexpr int kPanel = 256;  // columns of B kept hot in L2 across row tiles
  for (int jc = 0; jc < n; jc += kPanel) {
    const int jend = std::min(n, jc + kPanel);
    int i = 0;
    for (; i + 4 <= m; i += 4) {
      const double* arow = a + static_cast<long>(i) * lda;
      double* crow = c + static_cast<long>(i) * ldc;
      int j = jc;
      for (; j + 8 <= jend; j += 8) tile_4x8(k, arow, lda, b + j, ldb, crow + j, ldc);
      for (; j + 4 <= jend; j += 4)
        for (int r = 0; r < 4; ++r) tile_1x4(k, arow + static_cast<long>(r) * lda, b + j, ldb, crow + static_cast<long>(r) * ldc + j);
      for (; j < jend; ++j)
        for (int r = 0; r < 4; ++r) tile_1x1(k, arow + static_cast<long>(r) * lda, b + j, ldb, crow + static_cast<long>(r) * ldc + j);
    }
    for (; i < m; ++i) {
      const double* arow = a + static_cast<long>(i) * lda;
      double* crow = c + static_cast<long>(i) * ldc;
      int j = jc;
      for (; j + 4 <= jend; j += 4) tile_1x4(k, arow, b + j, ldb, crow + j);
      for (; j < jend; ++j) tile_1x1(k, arow, b + j, ldb, crow + j);
    }
  }
}

double dot(int n, const double* x, const double* y) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

/// Four dot products of A rows against one B row, sharing the B loads.
inline void dot_4x1(int k, const double* a, int lda, const double* b, double out[4]) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd(), s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
  const double* a0 = a;
  const double* a1 = a + lda;
  const double* a2 = a + 2L * lda;
  const double* a3 = a + 3L * lda;
  int p = 0;
  for (; p + 4 <= k; p += 4) {
    const __m256d bv = _mm256_loadu_pd(b + p);
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + p), bv, s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + p), bv, s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + p), bv, s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a3 + p), bv, s3);
  }
  out[0] = hsum(s0), out[1] = hsum(s1), out[2] = hsum(s2), out[3] = hsum(s3);
  for (; p < k; ++p) {
    out[0] += a0[p] * b[p];
    out[1] += a1[p] * b[p];
    out[2] += a2[p] * b[p];
    out[3] += a3[p] * b[p];
  }
}

void gemm_nt(int m, int n, int k, const double* a, int lda, const double* b, int ldb, double* c, int ldc) {
  for (int j = 0; j < n; ++j) {
    const double* brow = b + static_cast<long>(j) * ldb;
    int i = 0;
    for (; i + 4 <= m; i += 4) {
      double out[4];
      dot_4x1(k, a + static_cast<long>(i) * lda, lda, brow, out);
      for (int r = 0; r < 4; ++r) c[static_cast<long>(i + r) * ldc + j] += out[r];
    }
    for (; i < m; ++i) c[static_cast<long>(i) * ldc + j] += dot(k, a + static_cast<long>(i) * lda, brow);
  }
}

void axpy(int n, double alpha, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(alpha);
  int i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", gemm_nn, gemm_nt, dot, axpy};
  return table;
}

}  // namespace walkplan::nn::simd
