#include "dwell/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dwell {

GaussLegendre::GaussLegendre(int n) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: n < 2");
  x.resize(n);
  w.resize(n);
  // Newton iteration on P_n, Chebyshev initial guesses.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double xi = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = xi;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    p0 = 1.0;
    p1 = xi;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
    x[i] = -xi;
    x[n - 1 - i] = xi;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

namespace {
std::map<int, GaussLegendre> g_gl_cache;
std::map<int, GaussLaguerre> g_glag_cache;
std::mutex g_cache_mutex;
}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_gl_cache.find(n);
  if (it == g_gl_cache.end()) it = g_gl_cache.emplace(n, GaussLegendre(n)).first;
  return it->second;
}

GaussLaguerre::GaussLaguerre(int n) {
  if (n < 2) throw std::invalid_argument("gauss_laguerre: n < 2");
  x.resize(n);
  w.resize(n);
  double xi = 0.0;
  for (int i = 0; i < n; ++i) {
    // standard initial guesses (Stroud & Secrest)
    if (i == 0)
      xi = 3.0 / (1.0 + 2.4 * n);
    else if (i == 1)
      xi += 15.0 / (1.0 + 2.5 * n);
    else
      xi += ((1.0 + 2.55 * (i - 1)) / (1.9 * (i - 1))) * (xi - x[i - 2]);
    double p1 = 0.0, dp = 0.0;
    for (int it = 0; it < 200; ++it) {
      p1 = 1.0;
      double p0 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0 - xi) * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // derivative via L'_n = n (L_n - L_{n-1}) / x
      double p0n = 1.0, p1n = 0.0;
      {
        double a = 1.0, b = 0.0;
        for (int k = 1; k <= n - 1; ++k) {
          double c = ((2.0 * k - 1.0 - xi) * a - (k - 1.0) * b) / k;
          b = a;
          a = c;
        }
        p1n = a;
        (void)p0n;
      }
      dp = n * (p1 - p1n) / xi;
      double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15 * (1.0 + xi)) break;
    }
    x[i] = xi;
    // weight: x_i / ( (n+1)^2 [L_{n+1}(x_i)]^2 )
    double lnp1;
    {
      double a = 1.0, b = 0.0;
      for (int k = 1; k <= n + 1; ++k) {
        double c = ((2.0 * k - 1.0 - xi) * a - (k - 1.0) * b) / k;
        b = a;
        a = c;
      }
      lnp1 = a;
    }
    w[i] = xi / ((n + 1.0) * (n + 1.0) * lnp1 * lnp1);
  }
}

cplx GaussLaguerre::apply(const std::function<cplx(double)>& f) const {
  cplx acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) acc += w[i] * f(x[i]);
  return acc;
}

const GaussLaguerre& gauss_laguerre(int n) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_glag_cache.find(n);
  if (it == g_glag_cache.end()) it = g_glag_cache.emplace(n, GaussLaguerre(n)).first;
  return it->second;
}

namespace {

cplx panel_gl(const std::function<cplx(double)>& f, double a, double b, const GaussLegendre& rule) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx acc = 0.0;
  for (size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * f(mid + half * rule.x[i]);
  return half * acc;
}

void adapt(const std::function<cplx(double)>& f, double a, double b, cplx coarse,
           double tol, int depth, int max_depth, QuadResult& out, const GaussLegendre& rule) {
  const double mid = 0.5 * (a + b);
  const cplx left = panel_gl(f, a, mid, rule);
  const cplx right = panel_gl(f, mid, b, rule);
  out.evaluations += 2 * static_cast<int>(rule.x.size());
  const double err = std::abs(coarse - (left + right));
  if (err < tol || depth >= max_depth) {
    out.value += left + right;
    out.abs_error += err;
    return;
  }
  adapt(f, a, mid, left, 0.5 * tol, depth + 1, max_depth, out, rule);
  adapt(f, mid, b, right, 0.5 * tol, depth + 1, max_depth, out, rule);
}

}  // namespace

QuadResult integrate(const std::function<cplx(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_depth) {
  const GaussLegendre& rule = gauss_legendre(12);
  QuadResult out;
  cplx coarse = panel_gl(f, a, b, rule);
  out.evaluations = static_cast<int>(rule.x.size());
  double tol = std::max(abs_tol, rel_tol * std::abs(coarse));
  adapt(f, a, b, coarse, tol, 0, max_depth, out, rule);
  return out;
}

}  // namespace dwell
