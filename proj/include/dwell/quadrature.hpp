#pragma once

#include <functional>
#include <vector>

#include "dwell/branch.hpp"

namespace dwell {

struct QuadResult {
  cplx value{};
  double abs_error = 0.0;
  int evaluations = 0;
};

// Adaptive Gauss-Legendre quadrature of a complex integrand on [a, b].
// Error per panel is estimated by comparing an n-point rule against the
// same panel split in two; panels are bisected until the local estimate
// meets the tolerance budget.
QuadResult integrate(const std::function<cplx(double)>& f, double a, double b,
                     double abs_tol = 1e-12, double rel_tol = 1e-12,
                     int max_depth = 22);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n);
};
const GaussLegendre& gauss_legendre(int n);  // cached

// Nodes and weights of the n-point Gauss-Laguerre rule:
//   int_0^inf e^{-x} f(x) dx ~= sum w_i f(x_i)
struct GaussLaguerre {
  std::vector<double> x, w;
  explicit GaussLaguerre(int n);
  cplx apply(const std::function<cplx(double)>& f) const;
};
const GaussLaguerre& gauss_laguerre(int n);  // cached

}  // namespace dwell
