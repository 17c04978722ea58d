#include <doctest.h>

#include <cmath>
#include <vector>

#include "dwell/simd.hpp"

using namespace dwell;

namespace {
struct Rng {
  unsigned long long s = 0x9e3779b97f4a7c15ull;
  double operator()() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s % 2000001) / 1000000.0 - 1.0;
  }
};
}  // namespace

TEST_CASE("runtime-dispatched cdot matches the scalar reference") {
  Rng rng;
  for (size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 64ul, 1023ul}) {
    std::vector<double> ar(n), ai(n), br(n), bi(n);
    for (size_t i = 0; i < n; ++i) {
      ar[i] = rng();
      ai[i] = rng();
      br[i] = rng();
      bi[i] = rng();
    }
    double r0, i0, r1, i1;
    simd::cdot_scalar(ar.data(), ai.data(), br.data(), bi.data(), n, &r0, &i0);
    simd::cdot()(ar.data(), ai.data(), br.data(), bi.data(), n, &r1, &i1);
    const double scale = 1.0 + std::sqrt(static_cast<double>(n));
    CHECK(std::abs(r1 - r0) <= 1e-13 * scale);
    CHECK(std::abs(i1 - i0) <= 1e-13 * scale);
  }
}

#if defined(DWELL_BUILD_AVX2)
TEST_CASE("explicit avx2 variants agree with scalar when the host supports them") {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return;
  Rng rng;
  const size_t n = 777;
  std::vector<double> ar(n), ai(n), br(n), bi(n);
  for (size_t i = 0; i < n; ++i) {
    ar[i] = rng();
    ai[i] = rng();
    br[i] = rng();
    bi[i] = rng();
  }
  double r0, i0, r1, i1;
  simd::cdot_scalar(ar.data(), ai.data(), br.data(), bi.data(), n, &r0, &i0);
  simd::cdot_avx2(ar.data(), ai.data(), br.data(), bi.data(), n, &r1, &i1);
  CHECK(std::abs(r1 - r0) <= 1e-12);
  CHECK(std::abs(i1 - i0) <= 1e-12);

  const size_t K = 513;
  std::vector<double> acc_re0(K), acc_im0(K), ph_re0(K), ph_im0(K);
  std::vector<double> A_re(K), A_im(K), B_re(K), B_im(K), rot_re(K), rot_im(K);
  for (size_t i = 0; i < K; ++i) {
    acc_re0[i] = rng();
    acc_im0[i] = rng();
    const double th = rng();
    ph_re0[i] = std::cos(th);
    ph_im0[i] = std::sin(th);
    A_re[i] = rng();
    A_im[i] = rng();
    B_re[i] = rng();
    B_im[i] = rng();
    const double al = 0.01 * rng();
    rot_re[i] = std::cos(al);
    rot_im[i] = std::sin(al);
  }
  auto acc_re1 = acc_re0, acc_im1 = acc_im0, ph_re1 = ph_re0, ph_im1 = ph_im0;
  simd::spectrum_step_scalar(acc_re0.data(), acc_im0.data(), ph_re0.data(), ph_im0.data(),
                             A_re.data(), A_im.data(), B_re.data(), B_im.data(), rot_re.data(),
                             rot_im.data(), 0.3, -0.2, 0.05, 0.07, K);
  simd::spectrum_step_avx2(acc_re1.data(), acc_im1.data(), ph_re1.data(), ph_im1.data(),
                           A_re.data(), A_im.data(), B_re.data(), B_im.data(), rot_re.data(),
                           rot_im.data(), 0.3, -0.2, 0.05, 0.07, K);
  double worst = 0.0;
  for (size_t i = 0; i < K; ++i) {
    worst = std::max(worst, std::abs(acc_re1[i] - acc_re0[i]));
    worst = std::max(worst, std::abs(acc_im1[i] - acc_im0[i]));
    worst = std::max(worst, std::abs(ph_re1[i] - ph_re0[i]));
    worst = std::max(worst, std::abs(ph_im1[i] - ph_im0[i]));
  }
  CHECK(worst < 1e-13);
}
#endif

TEST_CASE("backend reports a known name") {
  const std::string b = simd::backend_name();
  CHECK((b == "avx2" || b == "neon" || b == "scalar"));
}
