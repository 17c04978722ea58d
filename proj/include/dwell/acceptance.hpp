#pragma once

// Acceptance thresholds; the verification suite and the preset summaries
// read these same constants.

namespace dwell::accept {

// 1: unitarity drift, psi0 = u_b, eta = 0.2 sin(1.5 t)
inline constexpr double uni_omega = 1.5, uni_r = 0.2;
inline constexpr double uni_T = 50.0, uni_h = 5e-3;
inline constexpr double uni_tol = 5e-3;
inline constexpr double uni_halving_gain = 1.8;

// 2: decay-rate scaling at omega = 1.5 for r in {0.1, 0.05}
inline constexpr double fermi_omega = 1.5, fermi_r_hi = 0.1, fermi_r_lo = 0.05;
inline constexpr double fermi_T = 400.0, fermi_h = 5e-3;
inline constexpr double fermi_ratio = 4.0, fermi_rel_tol = 0.20;

// 3: power-law tail of |theta - theta_inf|
inline constexpr double tail_T = 400.0, tail_h = 1e-2;
inline constexpr double tail_t0 = 100.0, tail_t1 = 400.0;
inline constexpr double tail_slope = -1.5, tail_slope_tol = 0.15;
// demonstration runs where the exponential transient has died inside [0, T]
inline constexpr double tail_demo_r1 = 0.7, tail_demo_t0_1 = 100.0;
inline constexpr double tail_demo_r2 = 0.5, tail_demo_t0_2 = 200.0;

// 4: lattice vs time-domain Laplace transform
inline constexpr double lap_rel_tol = 1e-4;
inline constexpr double lap_T = 60.0, lap_h = 2.5e-3;

// 5: closed-form transform of the memory kernel vs quadrature
inline constexpr double appA_tol = 1e-7;

// 6: continued-fraction figure reproduction (resolved example family)
inline constexpr double fig_omega = 1.1;
inline constexpr double fig_r_printed = 0.45;   // as printed alongside the figures
inline constexpr double fig_r_resolved = 0.75;  // coupling that reproduces the outputs
inline constexpr int fig_n0 = 10;
inline constexpr double fig_envelope_tol = 3e-6;
inline constexpr double fig_lambda_lo = 0.30, fig_lambda_hi = 0.40;
inline constexpr double fig_lambda_ref = 0.327, fig_lambda_tol = 0.005;

// 7: overlap constant with certified truncation remainder
inline constexpr double overlap_ref = -1.953, overlap_tol = 0.01;
inline constexpr int overlap_terms = 50;

// 8: ionization dichotomy at / off the exceptional ratio
inline constexpr double dich_T = 400.0, dich_h = 1e-2;
inline constexpr double dich_floor = 0.01;
inline constexpr double dich_window_lo = 300.0, dich_window_hi = 400.0;
inline constexpr double dich_detune = 0.05;
inline constexpr double dich_band_rel = 0.20;

// 9: genericity checker values
inline constexpr double gen_lambda = 0.433;
inline constexpr double gen_lambda_tol = 1e-10;
inline constexpr int gen_geo_N = 50;
inline constexpr int gen_harmonic_N[4] = {25, 50, 100, 200};
inline constexpr double gen_trig_tol = 1e-7;

// 10: pole-cancellation margin, eta = 0.3 sin(1.3 t)
inline constexpr double pole_omega = 1.3, pole_r = 0.3;
inline constexpr double pole_doubling_rel = 1e-6;

}  // namespace dwell::accept
