#include "dwell/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dwell/fft.hpp"
#include "dwell/genericity.hpp"

namespace dwell {

namespace {
const cplx kI(0.0, 1.0);
}

cplx lattice_b(cplx p) { return -(kI / p) * (1.0 + sqrt1mip(p)); }
cplx lattice_h(cplx p) { return -1.0 / p; }
cplx lattice_q(cplx p) { return -lattice_b(p); }

cplx lattice_coefficient(const ForcingSpec& spec, long j) {
  return -std::conj(spec.coefficient(j));
}

LatticeSystem build_lattice_system(const ForcingSpec& spec, cplx p0, int N) {
  if (N < 1) throw std::invalid_argument("build_lattice_system: N < 1");
  const double omega = spec.omega();
  const long jmax = spec.max_index(1e-16);
  if (N < spec.max_index(1e-12) + 10)
    throw std::invalid_argument("build_lattice_system: N must exceed the largest active harmonic by 10");
  LatticeSystem sys;
  sys.p0 = p0;
  sys.omega = omega;
  sys.N = N;
  const int dim = 2 * N + 1;
  sys.b_cache.resize(dim);
  sys.h_cache.resize(dim);
  for (int i = 0; i < dim; ++i) {
    const long n = static_cast<long>(i) - N;
    const cplx p = p0 + kI * (omega * static_cast<double>(n));
    if (std::abs(p) < 1e-14)
      throw std::invalid_argument("build_lattice_system: lattice point p0 + i n omega vanishes at n = " +
                                  std::to_string(n));
    sys.b_cache[i] = lattice_b(p);
    sys.h_cache[i] = lattice_h(p);
  }
  sys.ImJ = Eigen::MatrixXcd::Identity(dim, dim);
  sys.f = Eigen::VectorXcd::Zero(dim);
  for (long j = -jmax; j <= jmax; ++j) {
    if (j == 0) continue;
    const cplx cj = lattice_coefficient(spec, j);
    if (cj == cplx(0.0, 0.0)) continue;
    for (int i = 0; i < dim; ++i) {
      const long m = static_cast<long>(i) + j;  // column index of y_{n+j}
      // the inhomogeneity keeps the full stencil (h is just a function);
      // only the unknowns are truncated to |n| <= N
      const long n_of_m = m - N;
      const cplx pm = p0 + kI * (omega * static_cast<double>(n_of_m));
      if (std::abs(pm) < 1e-14)
        throw std::invalid_argument(
            "build_lattice_system: lattice point p0 + i n omega vanishes at n = " +
            std::to_string(n_of_m));
      sys.f(i) += cj * lattice_h(pm);
      if (m < 0 || m >= dim) continue;
      sys.ImJ(i, m) -= cj * sys.b_cache[m];
    }
  }
  return sys;
}

namespace {

LatticeSolution finish_solution(const LatticeSystem& sys, const Eigen::VectorXcd& y) {
  LatticeSolution sol;
  sol.p0 = sys.p0;
  sol.omega = sys.omega;
  sol.N = sys.N;
  const int dim = 2 * sys.N + 1;
  sol.y.assign(y.data(), y.data() + dim);
  sol.f.assign(sys.f.data(), sys.f.data() + dim);
  sol.b_cache = sys.b_cache;
  sol.h_cache = sys.h_cache;
  sol.q_cache.resize(dim);
  for (int i = 0; i < dim; ++i) sol.q_cache[i] = -sys.b_cache[i];
  const double ynorm = y.norm();
  // interior residual of the functional equation (rows away from the edge
  // see the full coefficient stencil)
  Eigen::VectorXcd r = sys.ImJ * y - sys.f;
  double rmax = 0.0;
  const int guard = std::min(sys.N / 2, sys.N - 1);
  for (int i = guard; i < dim - guard; ++i) rmax = std::max(rmax, std::abs(r(i)));
  sol.residual = ynorm > 0.0 ? rmax / ynorm : rmax;
  double edge = std::max(std::abs(y(0)), std::abs(y(dim - 1)));
  sol.tail_fraction = ynorm > 0.0 ? edge / ynorm : 0.0;
  sol.tail_ok = sol.tail_fraction < 1e-6;
  return sol;
}

}  // namespace

LatticeSolution solve_lattice(const LatticeSystem& sys) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.ImJ);
  Eigen::VectorXcd y = lu.solve(sys.f);
  const double rcond_proxy = (sys.ImJ * y - sys.f).norm() / std::max(1e-300, sys.f.norm());
  LatticeSolution sol = finish_solution(sys, y);
  if (!std::isfinite(y.norm()) || rcond_proxy > 1e-4)
    throw std::runtime_error("solve_lattice: matrix numerically singular (pole candidate)");
  return sol;
}

LatticeSolution solve_lattice_adaptive(const ForcingSpec& spec, cplx p0, int N0, double rel_tol,
                                       int N_max) {
  int N = std::max<long>(N0, spec.max_index(1e-12) + 10);
  LatticeSolution prev = solve_lattice(build_lattice_system(spec, p0, N));
  while (2 * N <= N_max) {
    LatticeSolution next = solve_lattice(build_lattice_system(spec, p0, 2 * N));
    const double change = std::abs(next.y_at(0) - prev.y_at(0));
    if (change <= rel_tol * std::abs(next.y_at(0))) return next;
    prev = std::move(next);
    N *= 2;
  }
  return prev;
}

double smallest_singular_value(const Eigen::MatrixXcd& A, Eigen::VectorXcd* right,
                               Eigen::VectorXcd* left) {
  const int n = static_cast<int>(A.rows());
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  Eigen::PartialPivLU<Eigen::MatrixXcd> luH(A.adjoint().eval());
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
  v.normalize();
  double sigma = 0.0;
  Eigen::VectorXcd u;
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXcd w = luH.solve(v);   // w = A^{-H} v
    Eigen::VectorXcd z = lu.solve(w);    // z = A^{-1} A^{-H} v
    const double zn = z.norm();
    if (!(zn > 0.0) || !std::isfinite(zn)) break;
    const double sigma_new = 1.0 / std::sqrt(zn);
    z /= zn;
    const double delta = (z - v).norm();
    v = z;
    u = std::move(w);
    if (std::abs(sigma_new - sigma) < 1e-12 * std::max(1.0, sigma_new) && delta < 1e-10) {
      sigma = sigma_new;
      break;
    }
    sigma = sigma_new;
  }
  if (right) *right = v;
  if (left) {
    u.normalize();
    *left = u;
  }
  return sigma;
}

SingularityReport classify_singularities(const ForcingSpec& spec, int N, int scan_points) {
  SingularityReport rep;
  const double omega = spec.omega();
  rep.k0 = -static_cast<long>(std::ceil(1.0 / omega - 1e-12));
  rep.s_r = -1.0 - static_cast<double>(rep.k0) * omega;
  const double invw = 1.0 / omega;
  const long M = std::lround(invw);
  rep.resonant = (M >= 1 && std::abs(invw - static_cast<double>(M)) < 1e-12);
  rep.resonant_M = rep.resonant ? M : 0;

  // scan sigma_min of (I-J)(is) over s in (0, omega)
  N = std::max<long>(N, spec.max_index(1e-12) + 10);
  std::vector<double> svals(scan_points, 0.0), spts(scan_points, 0.0);
  for (int i = 0; i < scan_points; ++i) {
    const double s = omega * (i + 0.5) / scan_points;
    spts[i] = s;
    LatticeSystem sys = build_lattice_system(spec, cplx(0.0, s), N);
    svals[i] = smallest_singular_value(sys.ImJ);
  }
  std::vector<double> sorted = svals;
  std::nth_element(sorted.begin(), sorted.begin() + scan_points / 2, sorted.end());
  const double median = sorted[scan_points / 2];
  auto sigma_at = [&](double s) {
    LatticeSystem sys = build_lattice_system(spec, cplx(0.0, s), N);
    return smallest_singular_value(sys.ImJ);
  };
  for (int i = 1; i + 1 < scan_points; ++i) {
    if (svals[i] < svals[i - 1] && svals[i] < svals[i + 1] && svals[i] < 0.05 * median) {
      // golden-section refinement of the dip
      double a = spts[i - 1], b = spts[i + 1];
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      double f1 = sigma_at(x1), f2 = sigma_at(x2);
      for (int it = 0; it < 48 && (b - a) > 1e-12; ++it) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - gr * (b - a);
          f1 = sigma_at(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + gr * (b - a);
          f2 = sigma_at(x2);
        }
      }
      const double s_min = 0.5 * (a + b);
      const double sigma_min = sigma_at(s_min);
      // a genuine kernel sits far below the operator scale; slow decay near
      // the coefficient pole at s = 0 or the branch point is not a candidate
      LatticeSystem probe = build_lattice_system(spec, cplx(0.0, s_min), N);
      const double mat_norm = probe.ImJ.norm();
      if (sigma_min < 1e-6 * mat_norm) rep.pole_candidates.push_back({s_min, sigma_min, median});
    }
  }
  return rep;
}

PoleCancellationReport check_pole_cancellation(const ForcingSpec& spec, int N) {
  const double omega = spec.omega();
  const double invw = 1.0 / omega;
  if (std::abs(invw - std::round(invw)) < 1e-12)
    throw std::invalid_argument("check_pole_cancellation: resonant case omega^{-1} in N");
  if (spec.form() == ForcingSpec::Form::geometric)
    throw std::invalid_argument(
        "check_pole_cancellation: geometric family fails the genericity condition");
  const long jmax = spec.max_index(1e-16);
  if (N < jmax + 10)
    throw std::invalid_argument("check_pole_cancellation: N must exceed the largest harmonic + 10");

  // index packing: rows/cols 0..2N-1 <-> n in [-N..-1] u [1..N]
  const int dim = 2 * N;
  auto pack = [N](long n) { return static_cast<int>(n < 0 ? n + N : n + N - 1); };
  std::vector<cplx> q(2 * N + 1);
  for (long n = -N; n <= N; ++n) {
    if (n == 0) continue;
    // q_n at s0 = 0:  (1 + sqrt(1 + n omega)) / (n omega), fourth-quadrant branch
    const double x = static_cast<double>(n) * omega;
    q[n + N] = (1.0 + sqrt_q4(cplx(1.0 + x, 0.0))) / x;
  }
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
  for (long n = -N; n <= N; ++n) {
    if (n == 0) continue;
    rhs(pack(n)) = -lattice_coefficient(spec, -n) * 2.0;  // (1+sqrt(1+s0)) = 2 at s0=0
    for (long k = -N; k <= N; ++k) {
      if (k == 0) continue;
      const cplx c = lattice_coefficient(spec, k - n);
      if (c == cplx(0.0, 0.0)) continue;
      A(pack(n), pack(k)) += c * q[k + N];
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  Eigen::VectorXcd d = lu.solve(rhs);
  const double relres = (A * d - rhs).norm() / std::max(1e-300, rhs.norm());
  if (!std::isfinite(d.norm()) || relres > 1e-8)
    throw std::runtime_error("check_pole_cancellation: (I - J') numerically singular");

  PoleCancellationReport rep;
  rep.N = N;
  rep.d.assign(d.data(), d.data() + dim);
  cplx S = 0.0;
  for (long j = -jmax; j <= jmax; ++j) {
    if (j == 0) continue;
    S += lattice_coefficient(spec, j) * q[j + N] * d(pack(j));
  }
  rep.S = S;
  rep.margin = std::abs(S);
  double tail = 0.0;
  for (long n : {-static_cast<long>(N), static_cast<long>(N)})
    tail = std::max(tail, std::abs(d(pack(n))));
  rep.tail_norm = tail;
  return rep;
}

ComplexSeries inverse_laplace_line(const std::function<cplx(double)>& y_line, double sigma,
                                   double smax, size_t nsamples, double t_need) {
  if (!(sigma > 0.0)) throw std::invalid_argument("inverse_laplace_line: sigma must be positive");
  const size_t n = next_power_of_two(nsamples);
  const double ds = 2.0 * smax / static_cast<double>(n);
  const double dt = 2.0 * pi / (static_cast<double>(n) * ds);
  const double t_cover = 0.45 * static_cast<double>(n) * dt;
  if (t_need > t_cover)
    throw std::invalid_argument(
        "inverse_laplace_line: insufficient sampling; need nsamples >= " +
        std::to_string(static_cast<size_t>(std::ceil(t_need / 0.45 / dt * 2)) ) +
        " at this smax (covered t range " + std::to_string(t_cover) + ")");
  // Y(t) = e^{sigma t}/(2 pi) int e^{ist} y(sigma+is) w(s) ds, Hann window w
  std::vector<cplx> data(n);
  for (size_t j = 0; j < n; ++j) {
    const double s = -smax + ds * static_cast<double>(j);
    const double w = 0.5 * (1.0 + std::cos(pi * s / smax));
    data[j] = y_line(s) * w;
  }
  fft_radix2(data, +1);  // sum_j data_j e^{+2pi i jm/n}
  ComplexSeries out;
  out.t0 = 0.0;
  out.dt = dt;
  const size_t nt = static_cast<size_t>(t_need / dt) + 1;
  out.values.resize(std::min(nt, n));
  for (size_t m = 0; m < out.values.size(); ++m) {
    const double t = dt * static_cast<double>(m);
    const cplx phase = std::exp(cplx(0.0, -smax * t));
    out.values[m] = std::exp(sigma * t) / (2.0 * pi) * ds * phase * data[m];
  }
  return out;
}

}  // namespace dwell
