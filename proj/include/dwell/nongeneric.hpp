#pragma once

#include <optional>
#include <vector>

#include "dwell/floquet.hpp"
#include "dwell/forcing.hpp"
#include "dwell/volterra.hpp"

namespace dwell {

// Machinery for the geometric family C_n ~ r lambda^n: continued-fraction
// evaluation of the small-solution ratio, location of the exceptional ratios
// lambda_s where the truncated lattice operator acquires a kernel, the kernel
// vector itself, and the overlap constant certifying a genuine pole.
//
// The member of the family whose lattice kernel exists is the one with
// coefficients +r lambda^n, i.e. eta(t) = -<geometric closed form>; the
// time-domain verification below simulates that member.

// a_n(s0) = (sqrt(1 + s0 + n omega) - 1)/r, fourth-quadrant branch when the
// argument is negative.
cplx eval_a(double omega, double r, double s0, long n);

// Location where 1 + a_{-1}(s) = 0 on the real branch: omega - 1 + (1-r)^2.
double analytic_pole_location(double omega, double r);

struct G0Bracket {
  double lower = 0.0, upper = 0.0, mid = 0.0;
  double width = 0.0;
  bool pole_flag = false;    // a g_n passed within 1e-14 of zero during descent
  bool ordered = true;       // endpoint ordering held at every level
};

enum class SeedMode { bracket, center };

// Backward iteration g_{n-1} = G_n - 1/g_n from depth n0 with seeds
// lambda^{-1} +- (1-lambda^2)/sqrt(n0 omega) (bracket mode) or the plain
// fixed-point seed (center mode).
G0Bracket continued_fraction_g0(double omega, double r, double lambda, double s0, int n0,
                                SeedMode mode = SeedMode::bracket);

// Initial-condition matching value: 1/(lambda + 1/lambda + (lambda-1/lambda)/(1+a_0)).
double matching_rhs(double omega, double r, double lambda, double s0);

struct LambdaRoot {
  double lambda_s = 0.0;
  double residual = 0.0;   // |g0 - matching| at the root
  double bracket = 0.0;    // n0-bracket width at the root
};

struct LambdaSearch {
  std::vector<LambdaRoot> roots;
  double s0 = 0.0;  // spectral parameter used for a_n
};

// Scans lambda in (0.02, 0.98) for sign changes of g0 - matching, skipping
// pole crossings, and polishes each bracketed root by bisection. s0 defaults
// to the analytic pole location (cross-checked by the singular-value scan).
LambdaSearch find_lambda_roots(double omega, double r, std::optional<double> s0 = std::nullopt,
                               int max_roots = 2, int scan_points = 400, int depth = 3000);

struct KernelVector {
  double omega = 0.0, r = 0.0, lambda_s = 0.0, s0 = 0.0;
  std::vector<double> z;       // z[i] = z_{i-1}: z[0] = z_{-1} = 1
  double decay_ratio = 0.0;    // fitted |z_{n+1}/z_n| tail ratio
  double recurrence_residual = 0.0;  // max relative three-step residual
};

// Small solution of the three-step recurrence via continued-fraction ratios
// (the general solution grows like lambda^{-n}; forward recursion is unstable).
KernelVector kernel_vector(double omega, double r, double lambda_s, double s0, int N);

// Truncation values of the redundancy sum sum_{k>=1} lambda^k z_{k-2}.
std::vector<double> redundancy_sums(const KernelVector& kv, const std::vector<int>& cuts);

struct OverlapResult {
  double c = 0.0;               // coupling-normalized overlap (real)
  double remainder_bound = 0.0; // geometric bound on the truncation tail
  double s_p = 0.0;
  double lambda_s = 0.0;
  int terms = 0;
};

// Overlap of the lattice inhomogeneity with the kernel vector at p0 = i s_p.
// Normalization: c = i <f, z>/r with z_{-1} = 1, which is real for this
// family; the sign makes the inner product real and negative here.
OverlapResult overlap_c(double omega, double r, double lambda_s, const KernelVector& kv,
                        int terms, double s_p);

struct IonizationVerdict {
  double P_floor = 0.0;        // inf of P over the final quarter
  double band_lo = 0.0, band_hi = 0.0;  // |theta| band over the final quarter
  double band_lo_mid = 0.0, band_hi_mid = 0.0;  // over [T/2, 3T/4]
  bool band_stable = false;    // widths agree within 20%
  std::vector<double> t, P;    // decimated survival series
};

// Runs the time-domain solver for the exceptional family member
// (eta = -(geometric closed form)) at ratio `lambda`, psi0 = u_b.
IonizationVerdict verify_incomplete_ionization(double omega, double r, double lambda, double T,
                                               double h = 1e-2);

// Builds (I-J)(i s0) for the exceptional member (coefficients +r lambda^n).
LatticeSystem exceptional_lattice_system(double omega, double r, double lambda, double s0, int N);

// Smallest-singular-value scan of the exceptional system over s in (0, omega),
// refined by golden section; returns the dip location (the numerical pole).
double exceptional_pole_scan(double omega, double r, double lambda, int N = 150,
                             int scan_points = 200, double* sigma_at_dip = nullptr);

}  // namespace dwell
