#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dwell/forcing.hpp"
#include "dwell/kernel.hpp"

namespace dwell {

// Bound/continuum decomposition of the initial state. The continuum part
// lives on a stored symmetric k-grid; normalization |theta0|^2 + int|Theta0|^2
// must equal 1 within 1e-8.
struct InitialState {
  cplx theta0{};
  std::vector<double> k_grid;   // empty for a pure bound state
  std::vector<cplx> Theta0;

  static InitialState bound();  // psi0 = u_b: theta0 = 1, Theta0 = 0
  static InitialState make(cplx theta0, std::vector<double> k_grid, std::vector<cplx> Theta0);
  double normalization() const;
  bool pure_bound() const { return k_grid.empty(); }
};

// Inhomogeneous term I(t) = theta0 + (i/sqrt(2pi)) int_0^inf
//   (Theta0(k)+Theta0(-k))/(1+ik) e^{-i(k^2+1)t} dk  (quadrature on the grid).
cplx eval_I(const InitialState& state, double t);

struct ComplexSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<cplx> values;
  double time_at(size_t i) const { return t0 + dt * static_cast<double>(i); }
};

// Raised when the first-cell implicit correction is not contractive; `suggested_h`
// is a step for which it is.
struct StepTooLarge : std::runtime_error {
  double suggested_h;
  StepTooLarge(const std::string& msg, double h) : std::runtime_error(msg), suggested_h(h) {}
};

// Forward time stepping of Y = eta (I + (2i+M)*Y) with product integration:
// the convolution uses exact cell moments of M against piecewise-linear Y,
// the 2i term uses the trapezoid rule, and the current-cell self-coupling is
// handled implicitly.
ComplexSeries solve_Y(const ForcingSpec& spec, const InitialState& state, double T, double h,
                      const KernelTable* table = nullptr);
// Same stepper for a custom real drive (used by the exceptional-family runs).
ComplexSeries solve_Y(const std::function<double(double)>& eta, const InitialState& state,
                      double T, double h, const KernelTable* table = nullptr,
                      double eta_sup = -1.0);

// theta(t) = theta0 + 2i int_0^t Y (cumulative trapezoid).
ComplexSeries compute_theta(const ComplexSeries& Y, cplx theta0);

// Theta(k,t) = Theta0(k) + 2|k|/(sqrt(2pi)(1-i|k|)) int_0^t Y(s) e^{i(1+k^2)s} ds,
// with the oscillatory integral done in closed form against piecewise-linear Y.
std::vector<cplx> compute_Theta(const ComplexSeries& Y, const InitialState& state,
                                const std::vector<double>& k_grid);

std::vector<double> default_k_grid(const ForcingSpec& spec, int points = 2048,
                                   double k_max_override = 0.0);

struct SimulationResult {
  ComplexSeries Y;
  ComplexSeries theta;
  std::vector<double> P;                    // |theta|^2
  std::vector<double> k_grid;
  std::vector<cplx> spectrum;               // Theta(k, T)
  std::vector<double> unitarity_residual;   // per time step
};

// Full pipeline with incremental spectrum accumulation; the unitarity
// residual |theta|^2 + int|Theta|^2 - 1 is tracked at every step.
SimulationResult simulate(const ForcingSpec& spec, const InitialState& state, double T,
                          double h, int k_points = 2048, double k_max_override = 0.0);
SimulationResult simulate(const std::function<double(double)>& eta, const ForcingSpec& grid_hint,
                          const InitialState& state, double T, double h, int k_points = 2048,
                          double k_max_override = 0.0);

// Composite Simpson (odd count) or trapezoid integral of |Theta|^2 over the grid.
double spectrum_norm(const std::vector<double>& k_grid, const std::vector<cplx>& Theta);

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct DecayFit {
  double gamma = 0.0;       // exponential rate of P on the fit window
  double gamma_r2 = 0.0;
  double tail_exponent = 0.0;  // log-log slope of |theta - theta_inf|
  double tail_r2 = 0.0;
  cplx theta_inf{};
};

// Exponential fit of P on [t0,t1]; tail fit of |theta - theta_inf| on
// [tail_t0, tail_t1] with theta_inf the mean over the final 5% of theta
// (or a caller-supplied limit, e.g. 0 when complete ionization is known).
// Windows shorter than 10 samples are an error.
DecayFit fit_decay(const ComplexSeries& theta, const std::vector<double>& P, double t0,
                   double t1, double tail_t0, double tail_t1,
                   std::optional<cplx> theta_inf_override = std::nullopt);

}  // namespace dwell
