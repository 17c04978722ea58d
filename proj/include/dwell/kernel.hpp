#pragma once

#include <vector>

#include "dwell/branch.hpp"

namespace dwell {

// Memory kernel of the reduced equation,
//   M(s) = c_M * int_s^inf e^{-iu} u^{-3/2} du,   c_M = (1+i)/(2 sqrt(2 pi)),
// equal to (2i/pi) int_0^inf u^2 e^{-is(1+u^2)}/(1+u^2) du.
// Integrable s^{-1/2} singularity at s = 0; |M| = O(s^{-3/2}) for large s.
inline const cplx kernel_prefactor = cplx(1.0, 1.0) / (2.0 * std::sqrt(2.0 * pi));

// Accurate to ~1e-12 absolute. Throws std::domain_error for s <= 0.
cplx eval_M(double s);

// Closed-form Laplace transform  -i/p + i sqrt(1-ip)/p  with the
// fourth-quadrant branch. Throws std::domain_error at p = 0.
cplx laplace_M(cplx p);

// int_s^inf e^{-iu} u^{-nu} du for nu in {-1/2, 1/2, 3/2}, s > 0.
// Used by the moment antiderivatives; exposed for oracle tests.
cplx kernel_tail_integral(double nu, double s);

// Antiderivatives vanishing at 0:  A(s) = int_0^s M,  B(s) = int_0^s u M(u) du.
cplx kernel_antiderivative_0(double s);
cplx kernel_antiderivative_1(double s);

// Precomputed cell moments and product-integration weights on a uniform grid
// of `cells` cells of width h. For a piecewise-linear Y the discrete
// convolution reads
//   (M*Y)(t_n) = w1[0] Y_n + sum_{k=1}^{n-1} W[k] Y_{n-k} + w0[n-1] Y_0.
struct KernelTable {
  double h = 0.0;
  int cells = 0;
  std::vector<cplx> m_values;       // M at grid points; NaN at s = 0
  std::vector<cplx> moments;        // m_k = int_{kh}^{(k+1)h} M ds
  std::vector<cplx> first_moments;  // fm_k = int_{kh}^{(k+1)h} (s - kh) M ds
  std::vector<cplx> w0, w1;         // per-cell weights: w0_k = fm_k/h, w1_k = m_k - fm_k/h
  std::vector<cplx> W;              // W[k] = w1[k] + w0[k-1], k >= 1 (W[0] unused)

  static KernelTable build(double h, int cells);
};

}  // namespace dwell
