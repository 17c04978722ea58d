#pragma once

#include <cstddef>
#include <string>

namespace dwell::simd {

// Complex dot product over split-layout arrays:
//   out = sum_k (ar[k] + i ai[k]) * (br[k] + i bi[k])
using CDotFn = void (*)(const double* ar, const double* ai, const double* br,
                        const double* bi, size_t n, double* out_re, double* out_im);

// One spectrum accumulation step over K momentum points, all arrays split
// complex of length K:
//   acc[k] += ph[k] * (y * A[k] + dy * B[k]);  ph[k] *= rot[k]
using SpectrumStepFn = void (*)(double* acc_re, double* acc_im, double* ph_re,
                                double* ph_im, const double* A_re, const double* A_im,
                                const double* B_re, const double* B_im,
                                const double* rot_re, const double* rot_im,
                                double y_re, double y_im, double dy_re, double dy_im,
                                size_t K);

void cdot_scalar(const double*, const double*, const double*, const double*, size_t,
                 double*, double*);
void spectrum_step_scalar(double*, double*, double*, double*, const double*, const double*,
                          const double*, const double*, const double*, const double*,
                          double, double, double, double, size_t);

#if defined(DWELL_BUILD_AVX2)
void cdot_avx2(const double*, const double*, const double*, const double*, size_t,
               double*, double*);
void spectrum_step_avx2(double*, double*, double*, double*, const double*, const double*,
                        const double*, const double*, const double*, const double*,
                        double, double, double, double, size_t);
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
void cdot_neon(const double*, const double*, const double*, const double*, size_t,
               double*, double*);
void spectrum_step_neon(double*, double*, double*, double*, const double*, const double*,
                        const double*, const double*, const double*, const double*,
                        double, double, double, double, size_t);
#endif

// Runtime-selected implementations. Honors DWELL_SIMD=scalar|avx2|neon.
CDotFn cdot();
SpectrumStepFn spectrum_step();
std::string backend_name();

}  // namespace dwell::simd
