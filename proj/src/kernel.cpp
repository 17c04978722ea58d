#include "dwell/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dwell/quadrature.hpp"

namespace dwell {

namespace {

constexpr double kAsymptoticSwitch = 30.0;
const cplx kI(0.0, 1.0);

// int_0^s e^{-iu} u^{p} du as an entire series, p > -1.
cplx lower_incomplete_series(double p, double s) {
  cplx term = std::pow(s, p + 1.0) / (p + 1.0);  // k = 0
  cplx acc = term;
  for (int k = 1; k < 200; ++k) {
    term *= -kI * s * (p + k) / (static_cast<double>(k) * (p + k + 1.0));
    acc += term;
    if (std::abs(term) < 1e-16 * (1.0 + std::abs(acc))) break;
  }
  return acc;
}

// Rotated-contour evaluation, valid for s >= ~0.5:
//   int_s^inf e^{-iu} u^{-nu} du = -i e^{-is} int_0^inf e^{-v} (s-iv)^{-nu} dv
cplx tail_rotated(double nu, double s) {
  const GaussLaguerre& gl = gauss_laguerre(180);
  cplx acc = 0.0;
  for (size_t i = 0; i < gl.x.size(); ++i)
    acc += gl.w[i] * std::pow(cplx(s, -gl.x[i]), -nu);
  return -kI * std::exp(cplx(0.0, -s)) * acc;
}

// Integration-by-parts expansion with smallest-term truncation; the
// remainder after K terms is bounded by |c_K| s^{1-nu-K}/(nu+K-1).
cplx tail_asymptotic(double nu, double s) {
  cplx coef = 1.0;
  cplx acc = 0.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 0; k < 64; ++k) {
    cplx term = coef * (-kI) * std::pow(s, -(nu + k));
    double mag = std::abs(term);
    if (mag > prev) break;  // past the smallest term
    acc += term;
    if (mag < 1e-14 * (1.0 + std::abs(acc))) break;
    prev = mag;
    coef *= kI * (nu + k);
  }
  return std::exp(cplx(0.0, -s)) * acc;
}

// F(s) = int_0^s e^{-iu} u^{-1/2} du, G(s) = int_0^s e^{-iu} u^{1/2} du.
const cplx kFullHalf = std::sqrt(pi / 2.0) * cplx(1.0, -1.0);       // int_0^inf, u^{-1/2}
const cplx kFullThreeHalf =                                          // int_0^inf, u^{+1/2}
    0.5 * std::sqrt(pi) * std::exp(cplx(0.0, -3.0 * pi / 4.0));

cplx F_half(double s) {
  if (s <= 1.0) return lower_incomplete_series(-0.5, s);
  return kFullHalf - kernel_tail_integral(0.5, s);
}

cplx G_half(double s) {
  if (s <= 1.0) return lower_incomplete_series(0.5, s);
  return kFullThreeHalf - kernel_tail_integral(-0.5, s);
}

}  // namespace

cplx kernel_tail_integral(double nu, double s) {
  if (s <= 0.0) throw std::domain_error("kernel_tail_integral: s <= 0");
  if (s >= kAsymptoticSwitch) return tail_asymptotic(nu, s);
  if (s > 1.0) return tail_rotated(nu, s);
  if (nu >= 1.0) {
    // reduce the divergent-at-0 case by one integration by parts
    return 2.0 * std::exp(cplx(0.0, -s)) / std::sqrt(s) -
           2.0 * kI * (kFullHalf - lower_incomplete_series(-0.5, s));
  }
  // small s, nu < 1: complement of the entire series
  const cplx full = (nu > 0.0) ? kFullHalf : kFullThreeHalf;
  return full - lower_incomplete_series(-nu, s);
}

cplx eval_M(double s) {
  if (s <= 0.0) throw std::domain_error("eval_M: s <= 0");
  return kernel_prefactor * kernel_tail_integral(1.5, s);
}

cplx laplace_M(cplx p) {
  if (p == cplx(0.0, 0.0)) throw std::domain_error("laplace_M: pole at p = 0");
  return -kI / p + kI * sqrt1mip(p) / p;
}

cplx kernel_antiderivative_0(double s) {
  if (s == 0.0) return 0.0;
  return s * eval_M(s) + kernel_prefactor * F_half(s);
}

cplx kernel_antiderivative_1(double s) {
  if (s == 0.0) return 0.0;
  return 0.5 * s * s * eval_M(s) + 0.5 * kernel_prefactor * G_half(s);
}

KernelTable KernelTable::build(double h, int cells) {
  if (h <= 0.0) throw std::invalid_argument("KernelTable: h <= 0");
  if (cells < 1) throw std::invalid_argument("KernelTable: cells < 1");
  KernelTable t;
  t.h = h;
  t.cells = cells;
  t.m_values.resize(cells + 1);
  t.m_values[0] = cplx(std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN());
  std::vector<cplx> A(cells + 1), B(cells + 1);
  A[0] = B[0] = 0.0;
  for (int k = 1; k <= cells; ++k) {
    const double s = h * k;
    t.m_values[k] = eval_M(s);
    A[k] = kernel_antiderivative_0(s);
    B[k] = kernel_antiderivative_1(s);
  }
  t.moments.resize(cells);
  t.first_moments.resize(cells);
  t.w0.resize(cells);
  t.w1.resize(cells);
  t.W.assign(cells, cplx(0.0, 0.0));
  for (int k = 0; k < cells; ++k) {
    t.moments[k] = A[k + 1] - A[k];
    t.first_moments[k] = (B[k + 1] - B[k]) - (h * k) * t.moments[k];
    t.w0[k] = t.first_moments[k] / h;
    t.w1[k] = t.moments[k] - t.w0[k];
  }
  for (int k = 1; k < cells; ++k) t.W[k] = t.w1[k] + t.w0[k - 1];
  return t;
}

}  // namespace dwell
