#include "dwell/nongeneric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwell {

namespace {
const cplx kI(0.0, 1.0);
}

cplx eval_a(double omega, double r, double s0, long n) {
  if (!(r > 0.0)) throw std::invalid_argument("eval_a: r must be positive");
  const double arg = 1.0 + s0 + static_cast<double>(n) * omega;
  return (sqrt_q4(cplx(arg, 0.0)) - 1.0) / r;
}

double analytic_pole_location(double omega, double r) {
  return omega - 1.0 + (1.0 - r) * (1.0 - r);
}

namespace {

double a_real(double omega, double r, double s0, long n) {
  const double arg = 1.0 + s0 + static_cast<double>(n) * omega;
  if (arg < 0.0)
    throw std::domain_error("continued fraction: a_n requested below the branch point");
  return (std::sqrt(arg) - 1.0) / r;
}

double G_of(double omega, double r, double s0, double lambda, long n) {
  const double a = a_real(omega, r, s0, n);
  return lambda + (lambda * lambda + a) / (lambda * (1.0 + a));
}

// single backward descent from depth n0; flags near-zero divisions
double descend(double omega, double r, double s0, double lambda, int n0, double seed,
               bool* pole_flag) {
  double g = seed;
  for (int n = n0; n >= 1; --n) {
    if (std::abs(g) < 1e-14) {
      if (pole_flag) *pole_flag = true;
      g = (g >= 0.0 ? 1e-14 : -1e-14);
    }
    g = G_of(omega, r, s0, lambda, n) - 1.0 / g;
  }
  return g;
}

}  // namespace

G0Bracket continued_fraction_g0(double omega, double r, double lambda, double s0, int n0,
                                SeedMode mode) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("continued_fraction_g0: lambda outside (0,1)");
  if (n0 < 1) throw std::invalid_argument("continued_fraction_g0: n0 < 1");
  G0Bracket out;
  const double center = 1.0 / lambda;
  if (mode == SeedMode::center) {
    bool flag = false;
    out.mid = descend(omega, r, s0, lambda, n0, center, &flag);
    out.lower = out.upper = out.mid;
    out.pole_flag = flag;
    out.width = 0.0;
    return out;
  }
  const double spread = (1.0 - lambda * lambda) / std::sqrt(static_cast<double>(n0) * omega);
  bool flag_lo = false, flag_hi = false;
  // the map g -> G - 1/g is increasing away from 0, so interval endpoints map
  // to endpoints as long as no descent crosses zero
  double lo = descend(omega, r, s0, lambda, n0, center - spread, &flag_lo);
  double hi = descend(omega, r, s0, lambda, n0, center + spread, &flag_hi);
  out.pole_flag = flag_lo || flag_hi;
  out.ordered = lo <= hi;
  if (!out.ordered) std::swap(lo, hi);
  out.lower = lo;
  out.upper = hi;
  out.mid = 0.5 * (lo + hi);
  out.width = hi - lo;
  return out;
}

double matching_rhs(double omega, double r, double lambda, double s0) {
  const double a0 = a_real(omega, r, s0, 0);
  return 1.0 / (lambda + 1.0 / lambda + (lambda - 1.0 / lambda) / (1.0 + a0));
}

LambdaSearch find_lambda_roots(double omega, double r, std::optional<double> s0_opt, int max_roots,
                               int scan_points, int depth) {
  LambdaSearch out;
  out.s0 = s0_opt.value_or(analytic_pole_location(omega, r));
  const double s0 = out.s0;

  auto F = [&](double lam, bool* flag) {
    bool pole = false;
    const double g0 = descend(omega, r, s0, lam, depth, 1.0 / lam, &pole);
    if (flag) *flag = pole;
    return g0 - matching_rhs(omega, r, lam, s0);
  };

  const double lo = 0.02, hi = 0.98;
  std::vector<double> lam(scan_points), Fv(scan_points);
  std::vector<bool> ok(scan_points);
  for (int i = 0; i < scan_points; ++i) {
    lam[i] = lo + (hi - lo) * static_cast<double>(i) / (scan_points - 1);
    bool flag = false;
    Fv[i] = F(lam[i], &flag);
    ok[i] = !flag && std::isfinite(Fv[i]) && std::abs(Fv[i]) < 50.0;
  }
  for (int i = 0; i + 1 < scan_points && static_cast<int>(out.roots.size()) < max_roots; ++i) {
    // guard radius around pole crossings: both neighbours must be clean
    if (!ok[i] || !ok[i + 1]) continue;
    if (Fv[i] == 0.0) continue;
    if (Fv[i] * Fv[i + 1] >= 0.0) continue;
    double a = lam[i], b = lam[i + 1], fa = Fv[i];
    for (int it = 0; it < 80; ++it) {
      const double m = 0.5 * (a + b);
      bool flag = false;
      const double fm = F(m, &flag);
      if (flag) break;
      if (fa * fm <= 0.0)
        b = m;
      else {
        a = m;
        fa = fm;
      }
    }
    LambdaRoot root;
    root.lambda_s = 0.5 * (a + b);
    bool flag = false;
    root.residual = std::abs(F(root.lambda_s, &flag));
    if (flag || root.residual > 1e-6) continue;  // pole masquerading as a root
    const G0Bracket br = continued_fraction_g0(omega, r, root.lambda_s, s0, 10);
    root.bracket = br.width;
    out.roots.push_back(root);
  }
  return out;
}

KernelVector kernel_vector(double omega, double r, double lambda_s, double s0, int N) {
  if (N < 50) throw std::invalid_argument("kernel_vector: N < 50");
  KernelVector kv;
  kv.omega = omega;
  kv.r = r;
  kv.lambda_s = lambda_s;
  kv.s0 = s0;
  // continued-fraction ratios g_0..g_N from a deep descent
  const int depth = N + 1 + std::max(2000, N);
  std::vector<double> g(N + 2, 0.0);
  double gv = 1.0 / lambda_s;
  for (int n = depth; n >= 1; --n) {
    if (std::abs(gv) < 1e-14) gv = std::copysign(1e-14, gv);
    gv = G_of(omega, r, s0, lambda_s, n) - 1.0 / gv;
    if (n - 1 <= N + 1) g[n - 1] = gv;
  }
  // V_{-1} = 1, V_m = V_{m-1}/g_m;  z_n = (lambda - 1/lambda)/(1+a_n) V_{n-1}
  kv.z.assign(N + 2, 0.0);
  kv.z[0] = 1.0;  // z_{-1}
  double V_prev = 1.0;
  const double fac = lambda_s - 1.0 / lambda_s;
  for (int n = 0; n <= N; ++n) {
    kv.z[n + 1] = fac / (1.0 + a_real(omega, r, s0, n)) * V_prev;
    if (std::abs(g[n]) < 1e-300) throw std::runtime_error("kernel_vector: ratio underflow");
    V_prev /= g[n];
  }
  // three-step recurrence residual, n = 0 .. N-1 (z indices shifted by 1)
  double worst = 0.0;
  for (int n = 0; n + 1 <= N; ++n) {
    const double a_nm1 = a_real(omega, r, s0, n - 1);
    const double a_n = a_real(omega, r, s0, n);
    const double a_np1 = a_real(omega, r, s0, n + 1);
    const double lhs = (1.0 + a_np1) * kv.z[n + 2] + (1.0 + a_nm1) * kv.z[n];
    const double rhs = (2.0 * lambda_s + (lambda_s + 1.0 / lambda_s) * a_n) * kv.z[n + 1];
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  kv.recurrence_residual = worst;
  // tail decay ratio over the last decade of entries
  double rsum = 0.0;
  int cnt = 0;
  for (int n = N - std::max(5, N / 10); n < N; ++n) {
    if (kv.z[n + 1] != 0.0) {
      rsum += std::abs(kv.z[n + 2] / kv.z[n + 1]);
      ++cnt;
    }
  }
  kv.decay_ratio = cnt ? rsum / cnt : 0.0;
  return kv;
}

std::vector<double> redundancy_sums(const KernelVector& kv, const std::vector<int>& cuts) {
  std::vector<double> out;
  for (int cut : cuts) {
    double s = 0.0;
    for (int k = 1; k <= cut && k - 1 < static_cast<int>(kv.z.size()); ++k)
      s += std::pow(kv.lambda_s, k) * kv.z[k - 1];  // z_{k-2} at index k-1
    out.push_back(s);
  }
  return out;
}

OverlapResult overlap_c(double omega, double r, double lambda_s, const KernelVector& kv,
                        int terms, double s_p) {
  (void)r;  // the reported normalization divides the coupling out
  OverlapResult out;
  out.s_p = s_p;
  out.lambda_s = lambda_s;
  out.terms = terms;
  const int available = static_cast<int>(kv.z.size()) - 1;  // z_{-1}..z_{available-1}
  if (terms + 1 > available) throw std::invalid_argument("overlap_c: kernel vector too short");
  const long jcut = static_cast<long>(std::ceil(std::log(1e-17) / std::log(lambda_s)));
  auto fsum = [&](long n) {
    double s = 0.0;
    for (long j = 1; j <= jcut; ++j) {
      const double lj = std::pow(lambda_s, static_cast<double>(j));
      s += lj / (s_p + static_cast<double>(n + j) * omega);
      s += lj / (s_p + static_cast<double>(n - j) * omega);
    }
    return s;
  };
  double c = 0.0;
  for (long n = -1; n < terms; ++n) c += kv.z[n + 1] * fsum(n);
  out.c = c;
  // geometric remainder: |z_n| <= |z_{terms-1}| q^{n-terms+1} with q the
  // certified decay ratio, and |fsum| decreasing for n >= terms
  const double q = std::min(0.999, kv.decay_ratio * 1.05);
  if (!(q < 1.0)) throw std::runtime_error("overlap_c: kernel tail not certified decaying");
  const double ztail = std::abs(kv.z[terms]);  // z_{terms-1}
  out.remainder_bound = 1.2 * ztail * q / (1.0 - q) * std::abs(fsum(terms));
  return out;
}

IonizationVerdict verify_incomplete_ionization(double omega, double r, double lambda, double T,
                                               double h) {
  auto eta = [=](double t) {
    const double c = std::cos(omega * t);
    return -2.0 * r * lambda * (lambda - c) / (1.0 + lambda * lambda - 2.0 * lambda * c);
  };
  const double sup = 2.0 * r * lambda / (1.0 - lambda);
  const InitialState state = InitialState::bound();
  const ComplexSeries Y = solve_Y(eta, state, T, h, nullptr, sup);
  const ComplexSeries th = compute_theta(Y, state.theta0);
  const size_t n = th.values.size();
  IonizationVerdict v;
  auto band = [&](size_t i0, size_t i1, double* lo, double* hi) {
    double mn = 1e300, mx = -1e300;
    for (size_t i = i0; i < i1; ++i) {
      const double a = std::abs(th.values[i]);
      mn = std::min(mn, a);
      mx = std::max(mx, a);
    }
    *lo = mn;
    *hi = mx;
  };
  band(3 * n / 4, n, &v.band_lo, &v.band_hi);
  band(n / 2, 3 * n / 4, &v.band_lo_mid, &v.band_hi_mid);
  const double w1 = v.band_hi - v.band_lo, w2 = v.band_hi_mid - v.band_lo_mid;
  v.band_stable = std::abs(w1 - w2) <= 0.2 * std::max(w1, w2);
  double pf = 1e300;
  for (size_t i = 3 * n / 4; i < n; ++i) pf = std::min(pf, std::norm(th.values[i]));
  v.P_floor = pf;
  const size_t stride = std::max<size_t>(1, n / 2000);
  for (size_t i = 0; i < n; i += stride) {
    v.t.push_back(th.time_at(i));
    v.P.push_back(std::norm(th.values[i]));
  }
  return v;
}

LatticeSystem exceptional_lattice_system(double omega, double r, double lambda, double s0,
                                         int N) {
  LatticeSystem sys;
  sys.p0 = cplx(0.0, s0);
  sys.omega = omega;
  sys.N = N;
  const int dim = 2 * N + 1;
  sys.b_cache.resize(dim);
  sys.h_cache.resize(dim);
  for (int i = 0; i < dim; ++i) {
    const long n = static_cast<long>(i) - N;
    const cplx p = sys.p0 + kI * (omega * static_cast<double>(n));
    if (std::abs(p) < 1e-14)
      throw std::invalid_argument("exceptional_lattice_system: lattice point vanishes at n = " +
                                  std::to_string(n));
    sys.b_cache[i] = lattice_b(p);
    sys.h_cache[i] = lattice_h(p);
  }
  sys.ImJ = Eigen::MatrixXcd::Identity(dim, dim);
  sys.f = Eigen::VectorXcd::Zero(dim);
  const long jcut = static_cast<long>(std::ceil(std::log(1e-17) / std::log(lambda)));
  for (long j = -jcut; j <= jcut; ++j) {
    if (j == 0) continue;
    const cplx cj = -r * std::pow(lambda, std::abs(static_cast<double>(j)));
    for (int i = 0; i < dim; ++i) {
      const long m = static_cast<long>(i) + j;
      sys.f(i) += cj * lattice_h(sys.p0 + kI * (omega * static_cast<double>(m - N)));
      if (m < 0 || m >= dim) continue;
      sys.ImJ(i, m) -= cj * sys.b_cache[m];
    }
  }
  return sys;
}

double exceptional_pole_scan(double omega, double r, double lambda, int N, int scan_points,
                             double* sigma_at_dip) {
  auto sigma = [&](double s) {
    LatticeSystem sys = exceptional_lattice_system(omega, r, lambda, s, N);
    return smallest_singular_value(sys.ImJ);
  };
  double best_s = 0.0, best = 1e300;
  for (int i = 0; i < scan_points; ++i) {
    const double s = omega * (i + 0.5) / scan_points;
    const double v = sigma(s);
    if (v < best) {
      best = v;
      best_s = s;
    }
  }
  double a = std::max(1e-6, best_s - omega / scan_points);
  double b = std::min(omega - 1e-6, best_s + omega / scan_points);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = sigma(x1), f2 = sigma(x2);
  for (int it = 0; it < 60 && (b - a) > 1e-11; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = sigma(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = sigma(x2);
    }
  }
  const double s_dip = 0.5 * (a + b);
  if (sigma_at_dip) *sigma_at_dip = sigma(s_dip);
  return s_dip;
}

}  // namespace dwell
