#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dwell/forcing.hpp"
#include "dwell/volterra.hpp"

namespace dwell {

// Laplace-domain lattice analysis. The transform y(p) of Y couples only the
// points p0 + i n omega; the truncated system over |n| <= N reads
// (I - J) y = f with
//   (J y)_n = sum_j chat_j b(p0 + i(n+j) omega) y_{n+j}
//   f_n     = sum_j chat_j h(p0 + i(n+j) omega)
//   h(p) = -1/p,  b(p) = -(i/p)(1 + sqrt(1-ip))  (fourth-quadrant branch)
// where chat_j = -conj(C_j) are the drive coefficients as they enter the
// transform of the product eta * (...). For purely imaginary C_j (sine
// drives) chat_j == C_j.
cplx lattice_b(cplx p);
cplx lattice_h(cplx p);
cplx lattice_q(cplx p);  // q = -b in the s0 = -i p0 variables

cplx lattice_coefficient(const ForcingSpec& spec, long j);  // chat_j

struct LatticeSystem {
  cplx p0{};
  double omega = 0.0;
  int N = 0;
  Eigen::MatrixXcd ImJ;  // I - J, dimension (2N+1)^2
  Eigen::VectorXcd f;
  std::vector<cplx> b_cache, h_cache;  // per lattice point, index n+N
};

// Throws if any lattice point p0 + i n omega vanishes (names the offending n).
LatticeSystem build_lattice_system(const ForcingSpec& spec, cplx p0, int N);

struct LatticeSolution {
  cplx p0{};
  double omega = 0.0;
  int N = 0;
  std::vector<cplx> y, f;      // index n+N
  std::vector<cplx> b_cache, h_cache, q_cache;
  double residual = 0.0;       // max interior residual relative to ||y||
  double tail_fraction = 0.0;  // max |y| on the outermost cells / ||y||
  bool tail_ok = true;
  cplx y_at(long n) const { return y[static_cast<size_t>(n + N)]; }
};

LatticeSolution solve_lattice(const LatticeSystem& sys);
// Doubles N until |y_0| is stable to rel_tol (hard cap N_max).
LatticeSolution solve_lattice_adaptive(const ForcingSpec& spec, cplx p0, int N0 = 64,
                                       double rel_tol = 1e-8, int N_max = 4096);

// Smallest singular value of A via inverse iteration through an LU
// factorization; optionally returns the right (kernel) and left (adjoint
// kernel) singular vectors.
double smallest_singular_value(const Eigen::MatrixXcd& A, Eigen::VectorXcd* right = nullptr,
                               Eigen::VectorXcd* left = nullptr);

struct SingularityReport {
  double s_r = 0.0;   // branch point in [0, omega)
  long k0 = 0;        // 1 + s_r + k0 omega = 0
  bool resonant = false;
  long resonant_M = 0;
  struct Candidate {
    double s0;
    double sigma_min;
    double sigma_median;
  };
  std::vector<Candidate> pole_candidates;
};

// Branch-point location, resonance flag, and pole candidates from a scan of
// the smallest singular value of (I-J)(is) over s in (0, omega).
SingularityReport classify_singularities(const ForcingSpec& spec, int N = 120,
                                         int scan_points = 240);

struct PoleCancellationReport {
  int N = 0;
  std::vector<cplx> d;  // d_n for n != 0, index packing [-N..-1,1..N]
  cplx S{};             // sum_{j!=0} chat_j q_j d_j at s0 = 0
  double margin = 0.0;  // |S|
  double tail_norm = 0.0;
};

// Solves the regularized n != 0 system at s0 = 0 and evaluates the
// pole-cancellation sum. Requires omega^{-1} not an integer and a forcing
// with genericity evidence (geometric-family specs are rejected).
PoleCancellationReport check_pole_cancellation(const ForcingSpec& spec, int N);

// Bromwich inversion on the line Re p = sigma via an FFT of windowed samples
// y(sigma + is), |s| <= smax. The returned series lives on the FFT time grid
// dt = 2 pi / (nsamples * ds); requesting t_need beyond the covered range is
// an error naming the required sampling.
ComplexSeries inverse_laplace_line(const std::function<cplx(double)>& y_line, double sigma,
                                   double smax, size_t nsamples, double t_need);

}  // namespace dwell
