#include "dwell/simd.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__aarch64__) || defined(__ARM_NEON)
#include <arm_neon.h>
#endif

namespace dwell::simd {

void cdot_scalar(const double* ar, const double* ai, const double* br, const double* bi,
                 size_t n, double* out_re, double* out_im) {
  double sre = 0.0, sim = 0.0;
  for (size_t k = 0; k < n; ++k) {
    sre += ar[k] * br[k] - ai[k] * bi[k];
    sim += ar[k] * bi[k] + ai[k] * br[k];
  }
  *out_re = sre;
  *out_im = sim;
}

void spectrum_step_scalar(double* acc_re, double* acc_im, double* ph_re, double* ph_im,
                          const double* A_re, const double* A_im, const double* B_re,
                          const double* B_im, const double* rot_re, const double* rot_im,
                          double y_re, double y_im, double dy_re, double dy_im, size_t K) {
  for (size_t k = 0; k < K; ++k) {
    const double ure = y_re * A_re[k] - y_im * A_im[k] + dy_re * B_re[k] - dy_im * B_im[k];
    const double uim = y_re * A_im[k] + y_im * A_re[k] + dy_re * B_im[k] + dy_im * B_re[k];
    acc_re[k] += ph_re[k] * ure - ph_im[k] * uim;
    acc_im[k] += ph_re[k] * uim + ph_im[k] * ure;
    const double pre = ph_re[k] * rot_re[k] - ph_im[k] * rot_im[k];
    const double pim = ph_re[k] * rot_im[k] + ph_im[k] * rot_re[k];
    ph_re[k] = pre;
    ph_im[k] = pim;
  }
}

#if defined(__aarch64__) || defined(__ARM_NEON)
void cdot_neon(const double* ar, const double* ai, const double* br, const double* bi,
               size_t n, double* out_re, double* out_im) {
  float64x2_t sre = vdupq_n_f64(0.0), sim = vdupq_n_f64(0.0);
  size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    float64x2_t xr = vld1q_f64(ar + k), xi = vld1q_f64(ai + k);
    float64x2_t yr = vld1q_f64(br + k), yi = vld1q_f64(bi + k);
    sre = vfmaq_f64(sre, xr, yr);
    sre = vfmsq_f64(sre, xi, yi);
    sim = vfmaq_f64(sim, xr, yi);
    sim = vfmaq_f64(sim, xi, yr);
  }
  double re = vaddvq_f64(sre), im = vaddvq_f64(sim);
  for (; k < n; ++k) {
    re += ar[k] * br[k] - ai[k] * bi[k];
    im += ar[k] * bi[k] + ai[k] * br[k];
  }
  *out_re = re;
  *out_im = im;
}

void spectrum_step_neon(double* acc_re, double* acc_im, double* ph_re, double* ph_im,
                        const double* A_re, const double* A_im, const double* B_re,
                        const double* B_im, const double* rot_re, const double* rot_im,
                        double y_re, double y_im, double dy_re, double dy_im, size_t K) {
  const float64x2_t yrv = vdupq_n_f64(y_re), yiv = vdupq_n_f64(y_im);
  const float64x2_t dyrv = vdupq_n_f64(dy_re), dyiv = vdupq_n_f64(dy_im);
  size_t k = 0;
  for (; k + 2 <= K; k += 2) {
    float64x2_t Ar = vld1q_f64(A_re + k), Ai = vld1q_f64(A_im + k);
    float64x2_t Br = vld1q_f64(B_re + k), Bi = vld1q_f64(B_im + k);
    float64x2_t ure = vmulq_f64(yrv, Ar);
    ure = vfmsq_f64(ure, yiv, Ai);
    ure = vfmaq_f64(ure, dyrv, Br);
    ure = vfmsq_f64(ure, dyiv, Bi);
    float64x2_t uim = vmulq_f64(yrv, Ai);
    uim = vfmaq_f64(uim, yiv, Ar);
    uim = vfmaq_f64(uim, dyrv, Bi);
    uim = vfmaq_f64(uim, dyiv, Br);
    float64x2_t pr = vld1q_f64(ph_re + k), pi = vld1q_f64(ph_im + k);
    float64x2_t arr = vld1q_f64(acc_re + k), aii = vld1q_f64(acc_im + k);
    arr = vfmaq_f64(arr, pr, ure);
    arr = vfmsq_f64(arr, pi, uim);
    aii = vfmaq_f64(aii, pr, uim);
    aii = vfmaq_f64(aii, pi, ure);
    vst1q_f64(acc_re + k, arr);
    vst1q_f64(acc_im + k, aii);
    float64x2_t rr = vld1q_f64(rot_re + k), ri = vld1q_f64(rot_im + k);
    float64x2_t npr = vmulq_f64(pr, rr);
    npr = vfmsq_f64(npr, pi, ri);
    float64x2_t npi = vmulq_f64(pr, ri);
    npi = vfmaq_f64(npi, pi, rr);
    vst1q_f64(ph_re + k, npr);
    vst1q_f64(ph_im + k, npi);
  }
  if (k < K)
    spectrum_step_scalar(acc_re + k, acc_im + k, ph_re + k, ph_im + k, A_re + k, A_im + k,
                         B_re + k, B_im + k, rot_re + k, rot_im + k, y_re, y_im, dy_re,
                         dy_im, K - k);
}
#endif

namespace {

enum class Backend { scalar, avx2, neon };

Backend pick_backend() {
  if (const char* env = std::getenv("DWELL_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
#if defined(DWELL_BUILD_AVX2)
    if (std::strcmp(env, "avx2") == 0) return Backend::avx2;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    if (std::strcmp(env, "neon") == 0) return Backend::neon;
#endif
    return Backend::scalar;
  }
#if defined(DWELL_BUILD_AVX2) && (defined(__x86_64__) || defined(__i386__))
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
  return Backend::neon;
#endif
  return Backend::scalar;
}

const Backend g_backend = pick_backend();

}  // namespace

CDotFn cdot() {
  switch (g_backend) {
#if defined(DWELL_BUILD_AVX2)
    case Backend::avx2:
      return &cdot_avx2;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    case Backend::neon:
      return &cdot_neon;
#endif
    default:
      return &cdot_scalar;
  }
}

SpectrumStepFn spectrum_step() {
  switch (g_backend) {
#if defined(DWELL_BUILD_AVX2)
    case Backend::avx2:
      return &spectrum_step_avx2;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    case Backend::neon:
      return &spectrum_step_neon;
#endif
    default:
      return &spectrum_step_scalar;
  }
}

std::string backend_name() {
  switch (g_backend) {
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
    default:
      return "scalar";
  }
}

}  // namespace dwell::simd
