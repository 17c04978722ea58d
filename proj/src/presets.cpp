#include "dwell/presets.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "dwell/acceptance.hpp"
#include "dwell/csv.hpp"
#include "dwell/nongeneric.hpp"
#include "dwell/svg.hpp"
#include "dwell/volterra.hpp"

namespace dwell {

namespace {

namespace acc = dwell::accept;

struct Summary {
  std::ostringstream text;
  bool all_pass = true;

  void line(const std::string& s) { text << s << "\n"; }
  void check(const std::string& what, double measured, bool pass) {
    text << what << ": measured " << format_g17(measured) << " -> "
         << (pass ? "PASS" : "FAIL") << "\n";
    if (!pass) all_pass = false;
  }
  int finish(const std::string& dir) {
    std::ofstream f(dir + "/summary.txt");
    f << text.str();
    return all_pass ? 0 : 2;
  }
};

void parallel_for(int jobs, int n, const std::function<void(int)>& fn) {
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

int preset_fermi(const std::string& dir, int /*jobs*/) {
  Summary sum;
  const InitialState state = InitialState::bound();
  auto gamma_of = [&](double r) {
    const ForcingSpec spec = sine_forcing(acc::fermi_omega, r);
    const ComplexSeries Y = solve_Y(spec, state, acc::fermi_T, acc::fermi_h);
    const ComplexSeries th = compute_theta(Y, state.theta0);
    std::vector<double> P(th.values.size());
    for (size_t i = 0; i < P.size(); ++i) P[i] = std::norm(th.values[i]);
    const DecayFit fit = fit_decay(th, P, 20.0, acc::fermi_T, 0.75 * acc::fermi_T, acc::fermi_T);
    return std::pair<DecayFit, std::vector<double>>(fit, std::move(P));
  };
  auto [fit_hi, P_hi] = gamma_of(acc::fermi_r_hi);
  auto [fit_lo, P_lo] = gamma_of(acc::fermi_r_lo);
  const double ratio = fit_hi.gamma / fit_lo.gamma;
  sum.line("decay-rate scaling, omega = " + format_g17(acc::fermi_omega));
  sum.line("Gamma(r=" + format_g17(acc::fermi_r_hi) + ") = " + format_g17(fit_hi.gamma) +
           "  (R^2 = " + format_g17(fit_hi.gamma_r2) + ")");
  sum.line("Gamma(r=" + format_g17(acc::fermi_r_lo) + ") = " + format_g17(fit_lo.gamma) +
           "  (R^2 = " + format_g17(fit_lo.gamma_r2) + ")");
  sum.check("Gamma ratio vs 4 within 20%", ratio,
            std::abs(ratio - acc::fermi_ratio) <= acc::fermi_rel_tol * acc::fermi_ratio);
  CsvTable t;
  t.header = {"t", "P_r_hi", "P_r_lo"};
  const size_t n = P_hi.size();
  const size_t stride = std::max<size_t>(1, n / 4000);
  for (size_t i = 0; i < n; i += stride)
    t.rows.push_back({acc::fermi_h * static_cast<double>(i), P_hi[i], P_lo[i]});
  t.write(dir + "/fermi.csv");
  return sum.finish(dir);
}

int preset_tail(const std::string& dir, bool svg) {
  Summary sum;
  const InitialState state = InitialState::bound();
  CsvTable t;
  t.header = {"t", "dev_r0.1", "dev_r0.7", "dev_r0.5"};
  std::vector<std::vector<double>> devs;
  std::vector<double> slopes, r2s;
  const double rs[3] = {acc::fermi_r_hi, acc::tail_demo_r1, acc::tail_demo_r2};
  const double t0s[3] = {acc::tail_t0, acc::tail_demo_t0_1, acc::tail_demo_t0_2};
  std::vector<double> tgrid;
  for (int k = 0; k < 3; ++k) {
    const ForcingSpec spec = sine_forcing(acc::fermi_omega, rs[k]);
    const ComplexSeries Y = solve_Y(spec, state, acc::tail_T, acc::tail_h);
    const ComplexSeries th = compute_theta(Y, state.theta0);
    std::vector<double> P(th.values.size());
    for (size_t i = 0; i < P.size(); ++i) P[i] = std::norm(th.values[i]);
    const DecayFit fit = fit_decay(th, P, 20.0, 100.0, t0s[k], acc::tail_t1);
    slopes.push_back(fit.tail_exponent);
    r2s.push_back(fit.tail_r2);
    std::vector<double> dev(th.values.size());
    for (size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(th.values[i] - fit.theta_inf);
    devs.push_back(std::move(dev));
    if (tgrid.empty())
      for (size_t i = 0; i < th.values.size(); ++i) tgrid.push_back(th.time_at(i));
  }
  const size_t stride = std::max<size_t>(1, tgrid.size() / 4000);
  for (size_t i = 0; i < tgrid.size(); i += stride)
    t.rows.push_back({tgrid[i], devs[0][i], devs[1][i], devs[2][i]});
  t.write(dir + "/tail.csv");
  sum.line("log-log slope of |theta - theta_inf|");
  sum.check("slope at r=0.1 over [100,400] in -1.5 +- 0.15 (as stated)", slopes[0],
            std::abs(slopes[0] - acc::tail_slope) <= acc::tail_slope_tol);
  sum.line("note: at r=0.1 the exponential stage (Gamma ~ 4.7e-3) has decayed only ~1.9");
  sum.line("e-folds by t=400, so the stated window is still exponential-dominated; the");
  sum.line("power-law regime is demonstrated below at couplings where it is reachable.");
  sum.check("slope at r=0.7 over [100,400] in -1.5 +- 0.15 (demonstration)", slopes[1],
            std::abs(slopes[1] - acc::tail_slope) <= acc::tail_slope_tol);
  sum.check("slope at r=0.5 over [200,400] in -1.5 +- 0.15 (demonstration)", slopes[2],
            std::abs(slopes[2] - acc::tail_slope) <= acc::tail_slope_tol);
  for (int k = 0; k < 3; ++k)
    sum.line("tail fit R^2 (r=" + format_g17(rs[k]) + ") = " + format_g17(r2s[k]) +
             (r2s[k] < 0.99 ? "  [flag: R^2 < 0.99]" : ""));
  if (svg) {
    std::vector<SvgSeries> series(3);
    const char* colors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
    for (int k = 0; k < 3; ++k) {
      series[k].color = colors[k];
      for (size_t i = 0; i < tgrid.size(); i += stride) {
        if (tgrid[i] < 10.0) continue;
        series[k].x.push_back(std::log10(tgrid[i]));
        series[k].y.push_back(devs[k][i]);
      }
    }
    write_svg_plot(dir + "/tail.svg", series, "bound-amplitude tail", "log10 t",
                   "|theta - theta_inf|", true);
  }
  return sum.finish(dir);
}

int figure_scan(const std::string& dir, int jobs, bool svg, double lo, double hi, int points,
                Summary& sum, const std::string& csv_name) {
  const double omega = acc::fig_omega, r = acc::fig_r_resolved;
  const double s0 = analytic_pole_location(omega, r);
  CsvTable t;
  t.header = {"lambda", "g0_lower", "g0_upper", "matching_rhs"};
  t.rows.resize(points);
  std::vector<double> widths(points);
  parallel_for(jobs, points, [&](int i) {
    const double lam = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    const G0Bracket g = continued_fraction_g0(omega, r, lam, s0, acc::fig_n0);
    t.rows[i] = {lam, g.lower, g.upper, matching_rhs(omega, r, lam, s0)};
    widths[i] = g.width;
  });
  t.write(dir + "/" + csv_name);
  double wmax_sub = 0.0, wmax_full = 0.0;
  for (int i = 0; i < points; ++i) {
    const double lam = t.rows[i][0];
    if (lam >= acc::fig_lambda_lo && lam <= acc::fig_lambda_hi)
      wmax_full = std::max(wmax_full, widths[i]);
    if (lam >= acc::fig_lambda_lo && lam <= 0.36) wmax_sub = std::max(wmax_sub, widths[i]);
  }
  sum.line("envelope width (n0 = " + std::to_string(acc::fig_n0) + ", coupling " +
           format_g17(r) + ", s0 = " + format_g17(s0) + ")");
  sum.check("max width on [0.30, 0.36] < 3e-6", wmax_sub, wmax_sub < acc::fig_envelope_tol);
  sum.check("max width on [0.30, 0.40] < 3e-6 (as stated)", wmax_full,
            wmax_full < acc::fig_envelope_tol);
  if (svg) {
    SvgSeries a, b;
    a.color = "#1f77b4";
    b.color = "#d62728";
    for (const auto& row : t.rows) {
      a.x.push_back(row[0]);
      a.y.push_back(0.5 * (row[1] + row[2]));
      b.x.push_back(row[0]);
      b.y.push_back(row[3]);
    }
    const std::string stem = csv_name.substr(0, csv_name.find_last_of('.'));
    write_svg_plot(dir + "/" + stem + ".svg", {a, b},
                   "continued fraction vs matching condition", "lambda", "g0");
  }
  return 0;
}

int preset_figures(const std::string& dir, int jobs, bool svg, bool zoomed) {
  Summary sum;
  if (!zoomed) {
    figure_scan(dir, jobs, svg, 0.05, 0.95, 721, sum, "g0_scan.csv");
  } else {
    figure_scan(dir, jobs, svg, 0.25, 0.45, 801, sum, "g0_scan_zoom.csv");
  }
  const LambdaSearch search = find_lambda_roots(acc::fig_omega, acc::fig_r_resolved);
  if (search.roots.empty()) {
    sum.check("first intersection found", 0.0, false);
  } else {
    const LambdaRoot& root = search.roots.front();
    sum.check("first intersection lambda_s = 0.327 +- 0.005", root.lambda_s,
              std::abs(root.lambda_s - acc::fig_lambda_ref) <= acc::fig_lambda_tol);
    sum.line("matching residual at root = " + format_g17(root.residual));
    if (search.roots.size() > 1)
      sum.line("next root (roots accumulate upward): lambda = " +
               format_g17(search.roots[1].lambda_s));
  }
  // reference numbers for the coupling value printed alongside the original
  // figures; its resonance location and first root are reported for the record
  const LambdaSearch printed = find_lambda_roots(acc::fig_omega, acc::fig_r_printed);
  if (!printed.roots.empty())
    sum.line("with coupling " + format_g17(acc::fig_r_printed) + " (as printed): s_p = " +
             format_g17(analytic_pole_location(acc::fig_omega, acc::fig_r_printed)) +
             ", first root lambda_s = " + format_g17(printed.roots.front().lambda_s));
  return sum.finish(dir);
}

int preset_overlap(const std::string& dir) {
  Summary sum;
  const double omega = acc::fig_omega, r = acc::fig_r_resolved;
  const LambdaSearch search = find_lambda_roots(omega, r);
  if (search.roots.empty()) throw std::runtime_error("overlap preset: no lambda_s root found");
  const double lambda_s = search.roots.front().lambda_s;
  double sigma_dip = 0.0;
  const double s_p = exceptional_pole_scan(omega, r, lambda_s, 150, 220, &sigma_dip);
  sum.line("lambda_s = " + format_g17(lambda_s));
  sum.line("s_p (singular-value scan) = " + format_g17(s_p) + "  [sigma_min = " +
           format_g17(sigma_dip) + "]");
  sum.line("s_p (analytic) = " + format_g17(analytic_pole_location(omega, r)));
  const KernelVector kv = kernel_vector(omega, r, lambda_s, s_p, 160);
  const OverlapResult c50 = overlap_c(omega, r, lambda_s, kv, acc::overlap_terms, s_p);
  const OverlapResult c10 = overlap_c(omega, r, lambda_s, kv, 10, s_p);
  sum.check("overlap c = -1.953 +- 0.01", c50.c,
            std::abs(c50.c - acc::overlap_ref) <= acc::overlap_tol);
  sum.line("certified truncation remainder (50 terms) = " + format_g17(c50.remainder_bound));
  sum.line("10-term truncation " + format_g17(c10.c) + " +- " + format_g17(c10.remainder_bound));
  sum.check("10-term bracket contains 50-term value", c10.c,
            std::abs(c10.c - c50.c) <= c10.remainder_bound);
  CsvTable t;
  t.header = {"quantity", "value"};
  // quantities as labeled rows: 0 lambda_s, 1 s_p_scan, 2 s_p_analytic, 3 c, 4 remainder
  t.rows = {{0, search.roots.front().lambda_s},
            {1, s_p},
            {2, analytic_pole_location(omega, r)},
            {3, c50.c},
            {4, c50.remainder_bound}};
  t.write(dir + "/overlap.csv");
  return sum.finish(dir);
}

}  // namespace

int run_preset(const std::string& name, const std::string& out_dir, int jobs, bool svg) {
  std::filesystem::create_directories(out_dir);
  if (name == "fermi-scaling") return preset_fermi(out_dir, jobs);
  if (name == "tail") return preset_tail(out_dir, svg);
  if (name == "figure1") return preset_figures(out_dir, jobs, svg, false);
  if (name == "figure2") return preset_figures(out_dir, jobs, svg, true);
  if (name == "overlap") return preset_overlap(out_dir);
  throw std::invalid_argument("unknown preset '" + name +
                              "' (known: fermi-scaling, tail, figure1, figure2, overlap)");
}

}  // namespace dwell
