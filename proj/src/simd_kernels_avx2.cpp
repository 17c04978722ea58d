#include "dwell/simd.hpp"

#if defined(DWELL_BUILD_AVX2)

#include <immintrin.h>

namespace dwell::simd {

namespace {
inline double hsum4(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}
}  // namespace

void cdot_avx2(const double* ar, const double* ai, const double* br, const double* bi,
               size_t n, double* out_re, double* out_im) {
  __m256d sre = _mm256_setzero_pd(), sim = _mm256_setzero_pd();
  size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d xr = _mm256_loadu_pd(ar + k);
    __m256d xi = _mm256_loadu_pd(ai + k);
    __m256d yr = _mm256_loadu_pd(br + k);
    __m256d yi = _mm256_loadu_pd(bi + k);
    sre = _mm256_fmadd_pd(xr, yr, sre);
    sre = _mm256_fnmadd_pd(xi, yi, sre);
    sim = _mm256_fmadd_pd(xr, yi, sim);
    sim = _mm256_fmadd_pd(xi, yr, sim);
  }
  double re = hsum4(sre), im = hsum4(sim);
  for (; k < n; ++k) {
    re += ar[k] * br[k] - ai[k] * bi[k];
    im += ar[k] * bi[k] + ai[k] * br[k];
  }
  *out_re = re;
  *out_im = im;
}

void spectrum_step_avx2(double* acc_re, double* acc_im, double* ph_re, double* ph_im,
                        const double* A_re, const double* A_im, const double* B_re,
                        const double* B_im, const double* rot_re, const double* rot_im,
                        double y_re, double y_im, double dy_re, double dy_im, size_t K) {
  const __m256d yrv = _mm256_set1_pd(y_re), yiv = _mm256_set1_pd(y_im);
  const __m256d dyrv = _mm256_set1_pd(dy_re), dyiv = _mm256_set1_pd(dy_im);
  size_t k = 0;
  for (; k + 4 <= K; k += 4) {
    __m256d Ar = _mm256_loadu_pd(A_re + k), Ai = _mm256_loadu_pd(A_im + k);
    __m256d Br = _mm256_loadu_pd(B_re + k), Bi = _mm256_loadu_pd(B_im + k);
    __m256d ure = _mm256_mul_pd(yrv, Ar);
    ure = _mm256_fnmadd_pd(yiv, Ai, ure);
    ure = _mm256_fmadd_pd(dyrv, Br, ure);
    ure = _mm256_fnmadd_pd(dyiv, Bi, ure);
    __m256d uim = _mm256_mul_pd(yrv, Ai);
    uim = _mm256_fmadd_pd(yiv, Ar, uim);
    uim = _mm256_fmadd_pd(dyrv, Bi, uim);
    uim = _mm256_fmadd_pd(dyiv, Br, uim);
    __m256d pr = _mm256_loadu_pd(ph_re + k), pi = _mm256_loadu_pd(ph_im + k);
    __m256d arr = _mm256_loadu_pd(acc_re + k), aii = _mm256_loadu_pd(acc_im + k);
    arr = _mm256_fmadd_pd(pr, ure, arr);
    arr = _mm256_fnmadd_pd(pi, uim, arr);
    aii = _mm256_fmadd_pd(pr, uim, aii);
    aii = _mm256_fmadd_pd(pi, ure, aii);
    _mm256_storeu_pd(acc_re + k, arr);
    _mm256_storeu_pd(acc_im + k, aii);
    __m256d rr = _mm256_loadu_pd(rot_re + k), ri = _mm256_loadu_pd(rot_im + k);
    __m256d npr = _mm256_mul_pd(pr, rr);
    npr = _mm256_fnmadd_pd(pi, ri, npr);
    __m256d npi = _mm256_mul_pd(pr, ri);
    npi = _mm256_fmadd_pd(pi, rr, npi);
    _mm256_storeu_pd(ph_re + k, npr);
    _mm256_storeu_pd(ph_im + k, npi);
  }
  if (k < K)
    spectrum_step_scalar(acc_re + k, acc_im + k, ph_re + k, ph_im + k, A_re + k, A_im + k,
                         B_re + k, B_im + k, rot_re + k, rot_im + k, y_re, y_im, dy_re,
                         dy_im, K - k);
}

}  // namespace dwell::simd

#endif  // DWELL_BUILD_AVX2
