#include "dwell/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dwell/simd.hpp"

namespace dwell {

namespace {
const cplx kI(0.0, 1.0);
}

InitialState InitialState::bound() {
  InitialState s;
  s.theta0 = 1.0;
  return s;
}

double InitialState::normalization() const {
  double n = std::norm(theta0);
  if (!k_grid.empty()) {
    // trapezoid over the stored grid
    for (size_t i = 0; i + 1 < k_grid.size(); ++i)
      n += 0.5 * (std::norm(Theta0[i]) + std::norm(Theta0[i + 1])) * (k_grid[i + 1] - k_grid[i]);
  }
  return n;
}

InitialState InitialState::make(cplx theta0, std::vector<double> k_grid,
                                std::vector<cplx> Theta0) {
  if (k_grid.size() != Theta0.size())
    throw std::invalid_argument("InitialState: grid/amplitude size mismatch");
  InitialState s;
  s.theta0 = theta0;
  s.k_grid = std::move(k_grid);
  s.Theta0 = std::move(Theta0);
  const double n = s.normalization();
  if (std::abs(n - 1.0) > 1e-8)
    throw std::invalid_argument("InitialState: normalization " + std::to_string(n) +
                                " is not 1 within 1e-8");
  return s;
}

cplx eval_I(const InitialState& state, double t) {
  if (state.pure_bound()) return state.theta0;
  // fold onto k >= 0 and integrate (Theta0(k)+Theta0(-k))/(1+ik) e^{-i(k^2+1)t}
  cplx acc = 0.0;
  const auto& kg = state.k_grid;
  auto integrand = [&](size_t i) -> cplx {
    const double k = kg[i];
    if (k < 0.0) return 0.0;
    // locate -k by symmetry of the stored grid
    cplx sym = 0.0;
    for (size_t j = 0; j < kg.size(); ++j)
      if (std::abs(kg[j] + k) < 1e-12) {
        sym = state.Theta0[j];
        break;
      }
    return (state.Theta0[i] + sym) / cplx(1.0, k) * std::exp(-kI * (k * k + 1.0) * t);
  };
  for (size_t i = 0; i + 1 < kg.size(); ++i) {
    if (kg[i] < 0.0 || kg[i + 1] < 0.0) continue;
    acc += 0.5 * (integrand(i) + integrand(i + 1)) * (kg[i + 1] - kg[i]);
  }
  return state.theta0 + kI / std::sqrt(2.0 * pi) * acc;
}

namespace {

struct Stepper {
  const KernelTable& table;
  double h;
  int N;
  // split storage; yrev mirrors y reversed so the convolution is a
  // contiguous ascending dot product
  std::vector<double> wre, wim;      // W[k]
  std::vector<double> yrev_re, yrev_im;
  cplx w1_0;

  explicit Stepper(const KernelTable& t, int steps) : table(t), h(t.h), N(steps) {
    wre.resize(N + 1);
    wim.resize(N + 1);
    for (int k = 1; k <= N && k < static_cast<int>(table.W.size()); ++k) {
      wre[k] = table.W[k].real();
      wim[k] = table.W[k].imag();
    }
    yrev_re.assign(N + 1, 0.0);
    yrev_im.assign(N + 1, 0.0);
    w1_0 = table.w1[0];
  }

  void put(int m, cplx y) {
    yrev_re[N - m] = y.real();
    yrev_im[N - m] = y.imag();
  }

  // sum_{k=1}^{n-1} W[k] Y_{n-k}
  cplx convolve_interior(int n) const {
    if (n < 2) return 0.0;
    double re = 0.0, im = 0.0;
    simd::cdot()(wre.data() + 1, wim.data() + 1, yrev_re.data() + (N - n + 1),
                 yrev_im.data() + (N - n + 1), static_cast<size_t>(n - 1), &re, &im);
    return {re, im};
  }
};

ComplexSeries solve_impl(const std::function<double(double)>& eta,
                         const std::function<cplx(double)>& Ifun, double T, double h,
                         const KernelTable* table, double eta_sup) {
  if (!(T > 0.0) || !(h > 0.0)) throw std::invalid_argument("solve_Y: T and h must be positive");
  const int N = static_cast<int>(std::llround(T / h));
  if (N < 1) throw std::invalid_argument("solve_Y: horizon shorter than one step");
  KernelTable local;
  if (!table || table->h != h || table->cells < N) {
    local = KernelTable::build(h, N);
    table = &local;
  }

  // contraction of the implicit first-cell correction
  const double selfcoef = std::abs(cplx(0.0, h) + table->w1[0]);
  if (eta_sup > 0.0 && eta_sup * selfcoef >= 1.0) {
    double hs = h;
    while (hs > 1e-12) {
      hs *= 0.5;
      KernelTable probe = KernelTable::build(hs, 1);
      if (eta_sup * std::abs(cplx(0.0, hs) + probe.w1[0]) < 0.5) break;
    }
    throw StepTooLarge("solve_Y: step too large for contraction; try h <= " +
                           std::to_string(hs),
                       hs);
  }

  ComplexSeries Y;
  Y.t0 = 0.0;
  Y.dt = h;
  Y.values.resize(N + 1);
  Stepper st(*table, N);

  Y.values[0] = eta(0.0) * Ifun(0.0);
  st.put(0, Y.values[0]);
  cplx runsum = 0.0;  // sum_{m=1}^{n-1} Y_m
  for (int n = 1; n <= N; ++n) {
    const double tn = h * n;
    const cplx conv = st.convolve_interior(n) + table->w0[n - 1] * Y.values[0];
    const cplx trap_known = h * (0.5 * Y.values[0] + runsum);
    const double et = eta(tn);
    const cplx rhs = et * (Ifun(tn) + 2.0 * kI * trap_known + conv);
    const cplx denom = 1.0 - et * (cplx(0.0, h) + st.w1_0);
    Y.values[n] = rhs / denom;
    st.put(n, Y.values[n]);
    runsum += Y.values[n];
  }
  return Y;
}

}  // namespace

ComplexSeries solve_Y(const ForcingSpec& spec, const InitialState& state, double T, double h,
                      const KernelTable* table) {
  auto eta = [&spec](double t) { return spec.eval_eta(t); };
  auto If = [&state](double t) { return eval_I(state, t); };
  return solve_impl(eta, If, T, h, table, spec.sup_norm());
}

ComplexSeries solve_Y(const std::function<double(double)>& eta, const InitialState& state,
                      double T, double h, const KernelTable* table, double eta_sup) {
  auto If = [&state](double t) { return eval_I(state, t); };
  return solve_impl(eta, If, T, h, table, eta_sup);
}

ComplexSeries compute_theta(const ComplexSeries& Y, cplx theta0) {
  ComplexSeries th;
  th.t0 = Y.t0;
  th.dt = Y.dt;
  th.values.resize(Y.values.size());
  cplx acc = 0.0;
  th.values[0] = theta0;
  for (size_t n = 1; n < Y.values.size(); ++n) {
    acc += 0.5 * (Y.values[n - 1] + Y.values[n]) * Y.dt;
    th.values[n] = theta0 + 2.0 * kI * acc;
  }
  return th;
}

std::vector<double> default_k_grid(const ForcingSpec& spec, int points, double k_max_override) {
  double kmax = k_max_override;
  if (kmax <= 0.0) {
    const double jmax = static_cast<double>(spec.max_index(1e-12));
    kmax = std::max(6.0, 3.0 * std::sqrt(spec.omega() * jmax));
  }
  std::vector<double> kg(points);
  for (int i = 0; i < points; ++i)
    kg[i] = -kmax + 2.0 * kmax * static_cast<double>(i) / (points - 1);
  return kg;
}

namespace {

// closed-form cell factors for int_0^h e^{i Omega u} {1, u/h} du
void filon_factors(double Om, double h, cplx* A, cplx* B) {
  const double x = Om * h;
  if (std::abs(x) < 1e-4) {
    // series to O(x^4) to avoid cancellation
    const cplx ix(0.0, x);
    *A = h * (1.0 + ix / 2.0 + ix * ix / 6.0 + ix * ix * ix / 24.0);
    *B = h * (0.5 + ix / 3.0 + ix * ix / 8.0 + ix * ix * ix / 30.0);
    return;
  }
  const cplx eix = std::exp(cplx(0.0, x));
  const cplx iOm(0.0, Om);
  *A = (eix - 1.0) / iOm;
  *B = (eix * (cplx(0.0, x) - 1.0) + 1.0) / (-Om * Om * h);
}

}  // namespace

std::vector<cplx> compute_Theta(const ComplexSeries& Y, const InitialState& state,
                                const std::vector<double>& k_grid) {
  const size_t K = k_grid.size();
  const size_t N = Y.values.empty() ? 0 : Y.values.size() - 1;
  std::vector<double> acc_re(K, 0.0), acc_im(K, 0.0), ph_re(K, 1.0), ph_im(K, 0.0);
  std::vector<double> A_re(K), A_im(K), B_re(K), B_im(K), rot_re(K), rot_im(K);
  for (size_t i = 0; i < K; ++i) {
    const double Om = 1.0 + k_grid[i] * k_grid[i];
    cplx A, B;
    filon_factors(Om, Y.dt, &A, &B);
    A_re[i] = A.real();
    A_im[i] = A.imag();
    B_re[i] = B.real();
    B_im[i] = B.imag();
    const cplx rot = std::exp(cplx(0.0, Om * Y.dt));
    rot_re[i] = rot.real();
    rot_im[i] = rot.imag();
  }
  auto step = simd::spectrum_step();
  for (size_t n = 0; n < N; ++n) {
    const cplx y = Y.values[n];
    const cplx dy = Y.values[n + 1] - Y.values[n];
    step(acc_re.data(), acc_im.data(), ph_re.data(), ph_im.data(), A_re.data(), A_im.data(),
         B_re.data(), B_im.data(), rot_re.data(), rot_im.data(), y.real(), y.imag(), dy.real(),
         dy.imag(), K);
  }
  std::vector<cplx> Theta(K);
  for (size_t i = 0; i < K; ++i) {
    const double k = k_grid[i];
    const double ak = std::abs(k);
    const cplx pref = 2.0 * ak / (std::sqrt(2.0 * pi) * cplx(1.0, -ak));
    cplx base = 0.0;
    if (!state.pure_bound()) base = state.Theta0[i];
    Theta[i] = base + pref * cplx(acc_re[i], acc_im[i]);
  }
  return Theta;
}

double spectrum_norm(const std::vector<double>& k_grid, const std::vector<cplx>& Theta) {
  const size_t K = k_grid.size();
  if (K < 2) return 0.0;
  const double dk = k_grid[1] - k_grid[0];
  if (K % 2 == 1) {
    // composite Simpson
    double s = std::norm(Theta[0]) + std::norm(Theta[K - 1]);
    for (size_t i = 1; i + 1 < K; ++i) s += (i % 2 ? 4.0 : 2.0) * std::norm(Theta[i]);
    return s * dk / 3.0;
  }
  double s = 0.0;
  for (size_t i = 0; i + 1 < K; ++i) s += 0.5 * (std::norm(Theta[i]) + std::norm(Theta[i + 1])) * dk;
  return s;
}

namespace {

SimulationResult simulate_impl(const std::function<double(double)>& eta, double eta_sup,
                               const ForcingSpec& grid_hint, const InitialState& state, double T,
                               double h, int k_points, double k_max_override) {
  SimulationResult out;
  out.Y = solve_Y(eta, state, T, h, nullptr, eta_sup);
  out.theta = compute_theta(out.Y, state.theta0);
  out.P.resize(out.theta.values.size());
  for (size_t i = 0; i < out.P.size(); ++i) out.P[i] = std::norm(out.theta.values[i]);

  out.k_grid = default_k_grid(grid_hint, k_points, k_max_override);
  const size_t K = out.k_grid.size();
  const size_t N = out.Y.values.size() - 1;
  std::vector<double> acc_re(K, 0.0), acc_im(K, 0.0), ph_re(K, 1.0), ph_im(K, 0.0);
  std::vector<double> A_re(K), A_im(K), B_re(K), B_im(K), rot_re(K), rot_im(K), pref_re(K),
      pref_im(K), base_re(K), base_im(K);
  for (size_t i = 0; i < K; ++i) {
    const double k = out.k_grid[i];
    const double Om = 1.0 + k * k;
    cplx A, B;
    filon_factors(Om, h, &A, &B);
    A_re[i] = A.real();
    A_im[i] = A.imag();
    B_re[i] = B.real();
    B_im[i] = B.imag();
    const cplx rot = std::exp(cplx(0.0, Om * h));
    rot_re[i] = rot.real();
    rot_im[i] = rot.imag();
    const double ak = std::abs(k);
    const cplx pref = 2.0 * ak / (std::sqrt(2.0 * pi) * cplx(1.0, -ak));
    pref_re[i] = pref.real();
    pref_im[i] = pref.imag();
    cplx base = state.pure_bound() ? cplx(0.0, 0.0) : state.Theta0[i];
    base_re[i] = base.real();
    base_im[i] = base.imag();
  }
  out.unitarity_residual.resize(N + 1);
  out.unitarity_residual[0] = state.normalization() - 1.0;
  auto step = simd::spectrum_step();
  std::vector<cplx> Theta(K);
  for (size_t n = 0; n < N; ++n) {
    const cplx y = out.Y.values[n];
    const cplx dy = out.Y.values[n + 1] - out.Y.values[n];
    step(acc_re.data(), acc_im.data(), ph_re.data(), ph_im.data(), A_re.data(), A_im.data(),
         B_re.data(), B_im.data(), rot_re.data(), rot_im.data(), y.real(), y.imag(), dy.real(),
         dy.imag(), K);
    for (size_t i = 0; i < K; ++i) {
      Theta[i] = cplx(base_re[i], base_im[i]) +
                 cplx(pref_re[i], pref_im[i]) * cplx(acc_re[i], acc_im[i]);
    }
    out.unitarity_residual[n + 1] = out.P[n + 1] + spectrum_norm(out.k_grid, Theta) - 1.0;
  }
  out.spectrum = std::move(Theta);
  return out;
}

}  // namespace

SimulationResult simulate(const ForcingSpec& spec, const InitialState& state, double T, double h,
                          int k_points, double k_max_override) {
  auto eta = [&spec](double t) { return spec.eval_eta(t); };
  return simulate_impl(eta, spec.sup_norm(), spec, state, T, h, k_points, k_max_override);
}

SimulationResult simulate(const std::function<double(double)>& eta, const ForcingSpec& grid_hint,
                          const InitialState& state, double T, double h, int k_points,
                          double k_max_override) {
  return simulate_impl(eta, grid_hint.sup_norm(), grid_hint, state, T, h, k_points,
                       k_max_override);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("linear_fit: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  LinearFit f;
  f.slope = (dn * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / dn;
  const double sstot = syy - sy * sy / dn;
  double ssres = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    ssres += e * e;
  }
  f.r2 = sstot > 0.0 ? 1.0 - ssres / sstot : 1.0;
  return f;
}

DecayFit fit_decay(const ComplexSeries& theta, const std::vector<double>& P, double t0, double t1,
                   double tail_t0, double tail_t1, std::optional<cplx> theta_inf_override) {
  DecayFit out;
  const size_t n = theta.values.size();
  // theta(inf) ~ mean over the final 5% of the window
  cplx mean = 0.0;
  if (theta_inf_override) {
    mean = *theta_inf_override;
  } else {
    const size_t tail_start = n - std::max<size_t>(1, n / 20);
    for (size_t i = tail_start; i < n; ++i) mean += theta.values[i];
    mean /= static_cast<double>(n - tail_start);
  }
  out.theta_inf = mean;

  std::vector<double> xs, ys;
  for (size_t i = 0; i < n; ++i) {
    const double t = theta.time_at(i);
    if (t < t0 || t > t1) continue;
    if (P[i] <= 0.0) continue;
    xs.push_back(t);
    ys.push_back(std::log(P[i]));
  }
  if (xs.size() < 10) throw std::invalid_argument("fit_decay: exponential window has < 10 samples");
  LinearFit ef = linear_fit(xs, ys);
  out.gamma = -ef.slope;
  out.gamma_r2 = ef.r2;

  xs.clear();
  ys.clear();
  for (size_t i = 0; i < n; ++i) {
    const double t = theta.time_at(i);
    if (t < tail_t0 || t > tail_t1) continue;
    const double d = std::abs(theta.values[i] - mean);
    if (d <= 0.0 || t <= 0.0) continue;
    xs.push_back(std::log(t));
    ys.push_back(std::log(d));
  }
  if (xs.size() < 10) throw std::invalid_argument("fit_decay: tail window has < 10 samples");
  LinearFit tf = linear_fit(xs, ys);
  out.tail_exponent = tf.slope;
  out.tail_r2 = tf.r2;
  return out;
}

}  // namespace dwell
