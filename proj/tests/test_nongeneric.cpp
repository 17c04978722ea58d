#include <doctest.h>

#include <cmath>

#include "dwell/nongeneric.hpp"

using namespace dwell;

TEST_CASE("a_n basics: zero at the origin, pole location, asymptotics") {
  CHECK(std::abs(eval_a(1.1, 0.45, 0.0, 0)) < 1e-15);
  CHECK(std::abs(eval_a(1.1, 0.9, 0.0, 0)) < 1e-15);
  // root of 1 + a_{-1}(s) over real s solves sqrt(1+s-omega) = 1-r
  const double sp = analytic_pole_location(1.1, 0.45);
  CHECK(sp == doctest::Approx(0.4025).epsilon(1e-14));
  CHECK(std::abs(1.0 + eval_a(1.1, 0.45, sp, -1)) < 1e-13);
  // a_n ~ sqrt(n omega)/r
  const double a4 = eval_a(1.1, 0.45, 0.2, 10000).real();
  CHECK(std::abs(a4 * 0.45 / std::sqrt(10000.0 * 1.1) - 1.0) < 1e-2);
  // fourth-quadrant branch below the cut
  const cplx am = eval_a(1.1, 0.45, 0.2, -3);
  CHECK(am.imag() < 0.0);
}

TEST_CASE("continued fraction matches the constant-coefficient closed form") {
  // backward iteration with constant G = 2 - eps^2 equals
  // cos((n-n0) phi + th)/cos((n+1-n0) phi + th), cos phi = 1 - eps^2/2
  const double eps = 0.17, lambda = 1.0 - eps;
  const double G = 2.0 - eps * eps;
  const double phi = std::acos(1.0 - eps * eps / 2.0);
  const double th = std::atan((std::cos(phi) - lambda) / std::sin(phi));
  const int n0 = 40;
  auto closed = [&](int n) {
    return std::cos((n - n0) * phi + th) / std::cos((n + 1 - n0) * phi + th);
  };
  double g = closed(n0);
  for (int n = n0; n >= n0 - 25; --n) {
    CHECK(std::abs(g - closed(n)) < 1e-10);
    g = G - 1.0 / g;  // value at n-1
  }
}

TEST_CASE("g0 brackets: depth convergence and envelope scale") {
  const double omega = 1.1, r = 0.75;
  const double s0 = analytic_pole_location(omega, r);
  for (double lam : {0.30, 0.327, 0.35}) {
    const G0Bracket b10 = continued_fraction_g0(omega, r, lam, s0, 10);
    const G0Bracket b20 = continued_fraction_g0(omega, r, lam, s0, 20);
    const G0Bracket deep = continued_fraction_g0(omega, r, lam, s0, 4000, SeedMode::center);
    CHECK(!b10.pole_flag);
    CHECK(b10.ordered);
    // The fixed-point seeds do not contain the true g_{n0} at depth 10 (the
    // offset of g_n from 1/lambda is still O(1) there), so the descended pair
    // is a seed-insensitivity envelope: the limit lies within a few widths.
    CHECK(std::abs(deep.mid - b10.mid) <= 3.0 * b10.width + 1e-12);
    CHECK(std::abs(b20.mid - b10.mid) <= 3.0 * b10.width + 1e-12);
    CHECK(b20.width < b10.width);
    CHECK(std::abs(b20.mid - deep.mid) < std::abs(b10.mid - deep.mid) + 1e-12);
  }
}

TEST_CASE("g_n stays inside the contraction ball around its fixed-point value") {
  // |g_n - 1/lambda| <= (1-lambda^2)/(lambda (1+a_{n+1})) + 2/(2+a_{n+2}) + slack:
  // the first term is the offset of the n-th fixed point from 1/lambda, the
  // second is the contraction-ball radius.
  const double omega = 1.1, r = 0.75;
  const double s0 = analytic_pole_location(omega, r);
  for (double lam : {0.30, 0.45}) {
    double g = 1.0 / lam;
    std::vector<double> gs(64, 0.0);
    for (int n = 4000; n >= 1; --n) {
      const double a = (std::sqrt(1.0 + s0 + n * omega) - 1.0) / r;
      g = lam + (lam * lam + a) / (lam * (1.0 + a)) - 1.0 / g;
      if (n - 1 < 64) gs[n - 1] = g;
    }
    for (int n = 2; n < 64; ++n) {
      const double a1 = (std::sqrt(1.0 + s0 + (n + 1) * omega) - 1.0) / r;
      const double a2 = (std::sqrt(1.0 + s0 + (n + 2) * omega) - 1.0) / r;
      const double radius = (1.0 - lam * lam) / (lam * (1.0 + a1)) + 2.0 / (2.0 + a2) + 0.05;
      CHECK(std::abs(gs[n] - 1.0 / lam) <= radius);
    }
  }
}

TEST_CASE("lambda_s search: resolved example family") {
  const LambdaSearch search = find_lambda_roots(1.1, 0.75);
  REQUIRE(!search.roots.empty());
  CHECK(search.s0 == doctest::Approx(0.1625).epsilon(1e-12));
  CHECK(search.roots[0].lambda_s == doctest::Approx(0.32686).epsilon(2e-3));
  CHECK(search.roots[0].residual < 1e-8);
  // at least one more root above the first (they accumulate upward)
  REQUIRE(search.roots.size() >= 2);
  CHECK(search.roots[1].lambda_s > search.roots[0].lambda_s);
}

TEST_CASE("lambda_s search: coupling as printed next to the original figures") {
  const LambdaSearch search = find_lambda_roots(1.1, 0.45);
  REQUIRE(!search.roots.empty());
  CHECK(search.s0 == doctest::Approx(0.4025).epsilon(1e-12));
  CHECK(search.roots[0].lambda_s == doctest::Approx(0.68682).epsilon(2e-3));
}

TEST_CASE("kernel vector: initial values, recurrence residual, redundancy decay") {
  const double omega = 1.1, r = 0.75;
  const LambdaSearch search = find_lambda_roots(omega, r);
  REQUIRE(!search.roots.empty());
  const double lam = search.roots[0].lambda_s;
  const KernelVector kv = kernel_vector(omega, r, lam, search.s0, 120);
  CHECK(kv.z[0] == 1.0);  // z_{-1}
  const double a0 = eval_a(omega, r, search.s0, 0).real();
  CHECK(kv.z[1] == doctest::Approx((lam - 1.0 / lam) / (1.0 + a0)).epsilon(1e-13));
  CHECK(kv.recurrence_residual < 1e-10);
  CHECK(kv.decay_ratio > 0.0);
  CHECK(kv.decay_ratio < 0.6);  // ~ lambda_s
  const std::vector<double> sums = redundancy_sums(kv, {20, 40, 80});
  // truncations tend to 0 like lambda^{n} sqrt(n); deeper cuts bottom out at
  // the floating-point floor
  CHECK((std::abs(sums[1]) < std::abs(sums[0]) || std::abs(sums[1]) < 1e-14));
  CHECK((std::abs(sums[2]) <= std::abs(sums[1]) || std::abs(sums[2]) < 1e-14));
  CHECK(std::abs(sums[2]) < 1e-10);
  const double shape = std::pow(kv.lambda_s, 22.0) * std::sqrt(20.0);
  CHECK(std::abs(sums[0]) < 50.0 * shape);
}

TEST_CASE("kernel vector is a numerical kernel of the truncated operator") {
  const double omega = 1.1, r = 0.75;
  const LambdaSearch search = find_lambda_roots(omega, r);
  REQUIRE(!search.roots.empty());
  const double lam = search.roots[0].lambda_s;
  const int N = 140;
  const KernelVector kv = kernel_vector(omega, r, lam, search.s0, N);
  const LatticeSystem sys = exceptional_lattice_system(omega, r, lam, search.s0, N);
  // y_n = r a_n z_n (scale-free); z_n = 0 for n < -1
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(2 * N + 1);
  for (long n = -1; n <= N; ++n)
    y(n + N) = r * eval_a(omega, r, search.s0, n) * kv.z[n + 1];
  const double rel = (sys.ImJ * y).norm() / y.norm();
  CHECK(rel < 1e-6);
}

TEST_CASE("adjoint kernel equals the a_n-rescaled kernel") {
  const double omega = 1.1, r = 0.75;
  const LambdaSearch search = find_lambda_roots(omega, r);
  REQUIRE(!search.roots.empty());
  const double lam = search.roots[0].lambda_s;
  const int N = 140;
  const LatticeSystem sys = exceptional_lattice_system(omega, r, lam, search.s0, N);
  Eigen::VectorXcd right, left;
  const double sigma = smallest_singular_value(sys.ImJ, &right, &left);
  CHECK(sigma < 1e-4);
  // left kernel ~ A^{-1} (right kernel): left_n proportional to right_n / a_n
  Eigen::VectorXcd scaled = Eigen::VectorXcd::Zero(2 * N + 1);
  for (long n = -N; n <= N; ++n) {
    const cplx a = eval_a(omega, r, search.s0, n);
    scaled(n + N) = right(n + N) / a;
  }
  scaled.normalize();
  const cplx phase = left.dot(scaled);  // conj(left) . scaled
  const double align = std::abs(phase);
  CHECK(align > 1.0 - 1e-6);
}

TEST_CASE("overlap constant at the resolved reading with certified remainder") {
  const double omega = 1.1, r = 0.75;
  const LambdaSearch search = find_lambda_roots(omega, r);
  REQUIRE(!search.roots.empty());
  const double lam = search.roots[0].lambda_s;
  double sigma_dip = 0.0;
  const double sp = exceptional_pole_scan(omega, r, lam, 120, 160, &sigma_dip);
  CHECK(sp == doctest::Approx(analytic_pole_location(omega, r)).epsilon(1e-4));
  const KernelVector kv = kernel_vector(omega, r, lam, sp, 160);
  const OverlapResult c50 = overlap_c(omega, r, lam, kv, 50, sp);
  const OverlapResult c100 = overlap_c(omega, r, lam, kv, 100, sp);
  CHECK(c50.c == doctest::Approx(-1.953).epsilon(0.005));
  CHECK(std::abs(c100.c - c50.c) <= c50.remainder_bound);
  CHECK(c50.c != 0.0);
  const OverlapResult c10 = overlap_c(omega, r, lam, kv, 10, sp);
  CHECK(std::abs(c10.c - c50.c) <= c10.remainder_bound);
}

TEST_CASE("plateau at lambda_s (short-horizon smoke check)") {
  const double omega = 1.1, r = 0.75;
  const LambdaSearch search = find_lambda_roots(omega, r);
  REQUIRE(!search.roots.empty());
  const IonizationVerdict v =
      verify_incomplete_ionization(omega, r, search.roots[0].lambda_s, 120.0, 0.02);
  CHECK(v.P_floor > 0.01);
}
