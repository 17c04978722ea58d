#pragma once

#include <complex>

namespace dwell {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Square root with values in the closed fourth quadrant (Re >= 0, Im <= 0).
// std::sqrt already keeps Re >= 0; when the principal value lands in the
// upper half plane (argument on or above the negative real axis) the other
// root is taken. On the negative real axis this picks sqrt(-x) = -i*sqrt(x),
// the limit from below, which is the axis limit of the right-half-plane
// branch used throughout.
inline cplx sqrt_q4(cplx z) {
  cplx w = std::sqrt(z);
  if (w.imag() > 0.0) w = -w;
  return w;
}

// sqrt(1 - i p) with the fourth-quadrant branch. For Re p > 0 the argument
// 1-ip lies in the lower half plane and the principal root is already in
// quadrant four; on the imaginary axis p = is this evaluates sqrt(1+s) for
// s >= -1 and -i*sqrt(-(1+s)) below the branch point.
inline cplx sqrt1mip(cplx p) { return sqrt_q4(1.0 - cplx(0.0, 1.0) * p); }

}  // namespace dwell
