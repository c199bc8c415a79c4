#include "detail.hpp"

#ifdef OCTA_HAVE_AVX2_KERNELS

#include <immintrin.h>

// Four 6x6 eliminations side by side, one matrix per 64-bit lane. Pivot
// choice and row swaps are done per lane with compare + blend so every lane
// follows exactly the scalar reference's operation sequence.

namespace octa::kernels::detail {
namespace {

#define OCTA_AVX2 __attribute__((target("avx2")))

struct Block {
  __m256d a[6][6];
};

OCTA_AVX2 inline void load4(const double* mats, Block& b) {
  const double* m0 = mats;
  const double* m1 = mats + 36;
  const double* m2 = mats + 72;
  const double* m3 = mats + 108;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      const int k = c * 6 + r;
      b.a[r][c] = _mm256_set_pd(m3[k], m2[k], m1[k], m0[k]);
    }
}

OCTA_AVX2 inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

OCTA_AVX2 __m256d eliminate4(Block& b) {
  __m256d sign = _mm256_set1_pd(1.0);
  __m256d det = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  for (int k = 0; k < 6; ++k) {
    __m256d best = vabs(b.a[k][k]);
    __m256d piv = _mm256_set1_pd(static_cast<double>(k));
    for (int r = k + 1; r < 6; ++r) {
      const __m256d v = vabs(b.a[r][k]);
      const __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
      best = _mm256_blendv_pd(best, v, gt);
      piv = _mm256_blendv_pd(piv, _mm256_set1_pd(static_cast<double>(r)), gt);
    }
    for (int r = k + 1; r < 6; ++r) {
      const __m256d sw =
          _mm256_cmp_pd(piv, _mm256_set1_pd(static_cast<double>(r)), _CMP_EQ_OQ);
      if (_mm256_movemask_pd(sw) == 0) continue;
      for (int c = 0; c < 6; ++c) {
        const __m256d top = b.a[k][c];
        b.a[k][c] = _mm256_blendv_pd(top, b.a[r][c], sw);
        b.a[r][c] = _mm256_blendv_pd(b.a[r][c], top, sw);
      }
      sign = _mm256_blendv_pd(sign, _mm256_sub_pd(zero, sign), sw);
    }
    const __m256d p = b.a[k][k];
    det = _mm256_mul_pd(det, p);
    const __m256d pzero = _mm256_cmp_pd(p, zero, _CMP_EQ_OQ);
    for (int r = k + 1; r < 6; ++r) {
      __m256d f = _mm256_div_pd(b.a[r][k], p);
      f = _mm256_blendv_pd(f, zero, pzero);
      for (int c = k + 1; c < 6; ++c)
        b.a[r][c] = _mm256_sub_pd(b.a[r][c], _mm256_mul_pd(f, b.a[k][c]));
    }
  }
  return _mm256_mul_pd(sign, det);
}

OCTA_AVX2 __m256d row_norm_product4(const Block& b) {
  __m256d prod = _mm256_set1_pd(1.0);
  for (int r = 0; r < 6; ++r) {
    __m256d ss = _mm256_setzero_pd();
    for (int c = 0; c < 6; ++c)
      ss = _mm256_add_pd(ss, _mm256_mul_pd(b.a[r][c], b.a[r][c]));
    prod = _mm256_mul_pd(prod, _mm256_sqrt_pd(ss));
  }
  return prod;
}

}  // namespace

OCTA_AVX2 void determinant_avx2(const double* mats, std::size_t n, double* out) {
  std::size_t i = 0;
  Block b;
  for (; i + 4 <= n; i += 4) {
    load4(mats + 36 * i, b);
    _mm256_storeu_pd(out + i, eliminate4(b));
  }
  if (i < n) determinant_scalar(mats + 36 * i, n - i, out + i);
}

OCTA_AVX2 void hadamard_ratio_avx2(const double* mats, std::size_t n, double* out) {
  std::size_t i = 0;
  Block b;
  const __m256d zero = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    load4(mats + 36 * i, b);
    const __m256d bound = row_norm_product4(b);
    const __m256d det = eliminate4(b);
    const __m256d ratio = _mm256_div_pd(det, bound);
    const __m256d degenerate = _mm256_cmp_pd(bound, zero, _CMP_EQ_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(ratio, zero, degenerate));
  }
  if (i < n) hadamard_ratio_scalar(mats + 36 * i, n - i, out + i);
}

#undef OCTA_AVX2

}  // namespace octa::kernels::detail

#endif  // OCTA_HAVE_AVX2_KERNELS
