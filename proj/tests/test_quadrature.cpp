#include <doctest.h>

#include <cmath>

#include "dwell/fft.hpp"
#include "dwell/quadrature.hpp"

using namespace dwell;

TEST_CASE("adaptive quadrature on smooth and oscillatory integrands") {
  auto r1 = integrate([](double x) { return cplx(std::exp(-x * x), 0.0); }, 0.0, 10.0);
  CHECK(std::abs(r1.value.real() - 0.5 * std::sqrt(pi)) < 1e-12);

  // int_0^1 e^{i 40 x} dx
  auto r2 = integrate([](double x) { return std::exp(cplx(0.0, 40.0 * x)); }, 0.0, 1.0);
  const cplx exact = (std::exp(cplx(0.0, 40.0)) - 1.0) / cplx(0.0, 40.0);
  CHECK(std::abs(r2.value - exact) < 1e-12);

  // integrable endpoint behavior via substitution-free adaptivity
  auto r3 = integrate([](double x) { return cplx(std::sqrt(x), 0.0); }, 0.0, 1.0, 1e-13, 1e-13);
  CHECK(std::abs(r3.value.real() - 2.0 / 3.0) < 1e-10);
}

TEST_CASE("gauss-laguerre integrates e^{-x} polynomials and shifted kernels") {
  const GaussLaguerre& gl = gauss_laguerre(64);
  double m3 = 0.0;
  for (size_t i = 0; i < gl.x.size(); ++i) m3 += gl.w[i] * gl.x[i] * gl.x[i] * gl.x[i];
  CHECK(std::abs(m3 - 6.0) < 1e-9);  // Gamma(4)

  // int_0^inf e^{-x}/(1+x) dx = e * E_1(1) = 0.59634736232319...
  double v = 0.0;
  for (size_t i = 0; i < gl.x.size(); ++i) v += gl.w[i] / (1.0 + gl.x[i]);
  CHECK(v == doctest::Approx(0.596347362323194).epsilon(1e-7));
}

TEST_CASE("radix-2 fft matches the naive transform and Parseval") {
  const size_t n = 64;
  std::vector<cplx> x(n);
  unsigned long long s = 88172645463325252ull;
  auto rng = [&s]() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s % 10000) / 5000.0 - 1.0;
  };
  for (auto& v : x) v = cplx(rng(), rng());
  std::vector<cplx> naive(n, 0.0);
  for (size_t m = 0; m < n; ++m)
    for (size_t k = 0; k < n; ++k)
      naive[m] += x[k] * std::exp(cplx(0.0, -2.0 * pi * static_cast<double>(k * m) / n));
  std::vector<cplx> fast = x;
  fft_radix2(fast, -1);
  double emax = 0.0, pin = 0.0, pout = 0.0;
  for (size_t m = 0; m < n; ++m) {
    emax = std::max(emax, std::abs(fast[m] - naive[m]));
    pin += std::norm(x[m]);
    pout += std::norm(fast[m]);
  }
  CHECK(emax < 1e-12);
  CHECK(pout == doctest::Approx(pin * n).epsilon(1e-12));
}
