// Command-line front end: time-domain simulation, kernel tables, genericity
// checks, Laplace-lattice solves, the geometric-family analysis, and the
// preset experiments.

#include <CLI11.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dwell/acceptance.hpp"
#include "dwell/config.hpp"
#include "dwell/csv.hpp"
#include "dwell/floquet.hpp"
#include "dwell/genericity.hpp"
#include "dwell/kernel.hpp"
#include "dwell/nongeneric.hpp"
#include "dwell/presets.hpp"
#include "dwell/volterra.hpp"

namespace {

using namespace dwell;

void write_simulation(const SimulationResult& sim, const std::string& out_dir,
                      bool spectrum_only) {
  std::filesystem::create_directories(out_dir);
  if (!spectrum_only) {
    CsvTable th;
    th.header = {"t", "re_theta", "im_theta", "P"};
    for (size_t i = 0; i < sim.theta.values.size(); ++i)
      th.rows.push_back({sim.theta.time_at(i), sim.theta.values[i].real(),
                         sim.theta.values[i].imag(), sim.P[i]});
    th.write(out_dir + "/theta.csv");
    CsvTable dg;
    dg.header = {"t", "unitarity_residual"};
    for (size_t i = 0; i < sim.unitarity_residual.size(); ++i)
      dg.rows.push_back({sim.theta.time_at(i), sim.unitarity_residual[i]});
    dg.write(out_dir + "/diag.csv");
  }
  CsvTable sp;
  sp.header = {"k", "Theta_sq"};
  for (size_t i = 0; i < sim.k_grid.size(); ++i)
    sp.rows.push_back({sim.k_grid[i], std::norm(sim.spectrum[i])});
  sp.write(out_dir + "/spectrum.csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-well ionization under periodic parametric forcing"};
  app.set_help_flag("--help", "print help");  // frees -h / --h for the step size
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads for scans")->capture_default_str();

  // simulate / spectrum
  double T = 50.0, h = 5e-3;
  int kpoints = 2048;
  double kmax = 0.0;
  auto add_sim_options = [&](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--config", config_path, "forcing config file")->required();
    cmd->add_option("--T", T, "horizon");
    cmd->add_option("--h", h, "step");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--kpoints", kpoints, "momentum grid points");
    cmd->add_option("--kmax", kmax, "momentum grid half-width (0 = auto)");
  };
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run the time-domain solver");
  add_sim_options(sim_cmd);
  CLI::App* spec_cmd = app.add_subcommand("spectrum", "emit only the ejected-momentum spectrum");
  add_sim_options(spec_cmd);

  // kernel table
  CLI::App* kernel_cmd = app.add_subcommand("kernel", "memory-kernel utilities");
  CLI::App* table_cmd = kernel_cmd->add_subcommand("table", "tabulate M and cell moments");
  table_cmd->set_help_flag("--help", "print help");
  double kt_h = 1e-2;
  int kt_cells = 100;
  std::string kt_out = "kernel_table.csv";
  table_cmd->add_option("--h", kt_h, "cell width")->required();
  table_cmd->add_option("--cells", kt_cells, "cell count")->required();
  table_cmd->add_option("--out", kt_out, "output CSV path")->required();

  // genericity
  CLI::App* gen_cmd = app.add_subcommand("genericity", "shift-span distance of e_1");
  std::string gen_family = "config";
  double gen_lambda = 0.5;
  int gen_N = 50;
  gen_cmd->add_option("--config", config_path, "forcing config file");
  gen_cmd->add_option("--family", gen_family, "config | geometric | harmonic");
  gen_cmd->add_option("--lambda", gen_lambda, "ratio for --family geometric");
  gen_cmd->add_option("--N", gen_N, "number of shifts");

  // floquet
  CLI::App* flo_cmd = app.add_subcommand("floquet", "Laplace-lattice solve and singularities");
  double re_p0 = 0.5, im_p0 = 0.0;
  int flo_N = 64;
  flo_cmd->add_option("--config", config_path, "forcing config file")->required();
  flo_cmd->add_option("--re-p0", re_p0, "Re p0");
  flo_cmd->add_option("--im-p0", im_p0, "Im p0");
  flo_cmd->add_option("--N", flo_N, "truncation half-width");
  flo_cmd->add_option("--out", out_dir, "output directory");

  // nongeneric
  CLI::App* ng_cmd = app.add_subcommand("nongeneric", "geometric-family analysis");
  double ng_omega = accept::fig_omega, ng_r = accept::fig_r_resolved, ng_lambda = 0.0,
         ng_T = 400.0, ng_h = 1e-2;
  CLI::App* ng_find = ng_cmd->add_subcommand("find-lambda", "locate exceptional ratios");
  ng_find->add_option("--omega", ng_omega, "drive frequency");
  ng_find->add_option("--r", ng_r, "coupling");
  ng_find->add_option("--out", out_dir, "output directory");
  CLI::App* ng_overlap = ng_cmd->add_subcommand("overlap", "kernel overlap constant");
  ng_overlap->add_option("--omega", ng_omega, "drive frequency");
  ng_overlap->add_option("--r", ng_r, "coupling");
  ng_overlap->add_option("--out", out_dir, "output directory");
  CLI::App* ng_verify = ng_cmd->add_subcommand("verify", "time-domain plateau check");
  ng_verify->set_help_flag("--help", "print help");
  ng_verify->add_option("--omega", ng_omega, "drive frequency");
  ng_verify->add_option("--r", ng_r, "coupling");
  ng_verify->add_option("--lambda", ng_lambda, "ratio (0 = locate lambda_s first)");
  ng_verify->add_option("--T", ng_T, "horizon");
  ng_verify->add_option("--h", ng_h, "step");
  ng_verify->add_option("--out", out_dir, "output directory");

  // preset
  CLI::App* preset_cmd = app.add_subcommand("preset", "run a named experiment preset");
  std::string preset_name;
  bool preset_svg = false;
  preset_cmd->add_option("name", preset_name, "preset name")->required();
  preset_cmd->add_option("--out", out_dir, "output directory");
  preset_cmd->add_flag("--svg", preset_svg, "also write SVG plots");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed() || spec_cmd->parsed()) {
      const ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
      const double Tv = sim_cmd->count("--T") || spec_cmd->count("--T") ? T : cfg.T;
      const double hv = sim_cmd->count("--h") || spec_cmd->count("--h") ? h : cfg.h;
      const SimulationResult sim =
          simulate(cfg.forcing, InitialState::bound(), Tv, hv,
                   kpoints > 0 ? kpoints : cfg.k_points, kmax > 0 ? kmax : cfg.k_max);
      write_simulation(sim, out_dir, spec_cmd->parsed());
      return 0;
    }
    if (table_cmd->parsed()) {
      const KernelTable kt = KernelTable::build(kt_h, kt_cells);
      CsvTable t;
      t.header = {"s", "re_M", "im_M", "re_m_k", "im_m_k"};
      for (int k = 0; k <= kt.cells; ++k) {
        const double s = kt_h * k;
        const cplx m = kt.m_values[k];
        const cplx mom = k < kt.cells ? kt.moments[k] : cplx(0.0, 0.0);
        t.rows.push_back({s, m.real(), m.imag(), mom.real(), mom.imag()});
      }
      t.write(kt_out);
      return 0;
    }
    if (gen_cmd->parsed()) {
      GenericityReport rep;
      if (gen_family == "config") {
        if (config_path.empty()) throw ConfigError("genericity: --config or --family required");
        const ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
        rep = genericity_distance(cfg.forcing, gen_N);
      } else if (gen_family == "geometric") {
        rep = genericity_distance(family_geometric(gen_lambda), gen_N);
      } else if (gen_family == "harmonic") {
        rep = genericity_distance(family_harmonic(), gen_N);
      } else {
        throw ConfigError("genericity: unknown family '" + gen_family + "'");
      }
      std::cout << "N = " << rep.N << "\ndistance = " << format_g17(rep.distance)
                << "\nverdict = " << to_string(rep.verdict)
                << "\nrank = " << rep.rank
                << "\nill_conditioned = " << (rep.ill_conditioned ? "yes" : "no") << "\n";
      return 0;
    }
    if (flo_cmd->parsed()) {
      std::filesystem::create_directories(out_dir);
      const ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
      const LatticeSolution sol =
          solve_lattice(build_lattice_system(cfg.forcing, cplx(re_p0, im_p0), flo_N));
      CsvTable lt;
      lt.header = {"n", "re_y", "im_y"};
      for (long n = -sol.N; n <= sol.N; ++n)
        lt.rows.push_back({static_cast<double>(n), sol.y_at(n).real(), sol.y_at(n).imag()});
      lt.write(out_dir + "/lattice.csv");
      const SingularityReport rep = classify_singularities(cfg.forcing);
      CsvTable st;
      st.header = {"s_r", "k0", "resonant", "pole_candidate_s", "pole_sigma_min"};
      if (rep.pole_candidates.empty()) {
        st.rows.push_back({rep.s_r, static_cast<double>(rep.k0), rep.resonant ? 1.0 : 0.0,
                           std::nan(""), std::nan("")});
      } else {
        for (const auto& cand : rep.pole_candidates)
          st.rows.push_back({rep.s_r, static_cast<double>(rep.k0), rep.resonant ? 1.0 : 0.0,
                             cand.s0, cand.sigma_min});
      }
      st.write(out_dir + "/singularities.csv");
      std::cout << "y_0 = " << format_g17(sol.y_at(0).real()) << " + "
                << format_g17(sol.y_at(0).imag()) << "i, residual " << sol.residual
                << ", tail ok: " << (sol.tail_ok ? "yes" : "no") << "\n";
      return 0;
    }
    if (ng_find->parsed()) {
      std::filesystem::create_directories(out_dir);
      const LambdaSearch search = find_lambda_roots(ng_omega, ng_r);
      const double s0 = search.s0;
      CsvTable t;
      t.header = {"lambda", "g0_lower", "g0_upper", "matching_rhs"};
      for (int i = 0; i < 721; ++i) {
        const double lam = 0.05 + 0.90 * i / 720.0;
        const G0Bracket g = continued_fraction_g0(ng_omega, ng_r, lam, s0, accept::fig_n0);
        t.rows.push_back({lam, g.lower, g.upper, matching_rhs(ng_omega, ng_r, lam, s0)});
      }
      t.write(out_dir + "/g0_scan.csv");
      for (const auto& root : search.roots)
        std::cout << "lambda_s = " << format_g17(root.lambda_s)
                  << " (residual " << format_g17(root.residual) << ")\n";
      if (search.roots.empty()) {
        std::cout << "no intersection found on (0.02, 0.98)\n";
        return 2;
      }
      return 0;
    }
    if (ng_overlap->parsed()) {
      // reuse the preset, which prints the full account
      return run_preset("overlap", out_dir, jobs, false);
    }
    if (ng_verify->parsed()) {
      std::filesystem::create_directories(out_dir);
      double lam = ng_lambda;
      if (lam <= 0.0) {
        const LambdaSearch search = find_lambda_roots(ng_omega, ng_r);
        if (search.roots.empty()) throw std::runtime_error("verify: no lambda_s found");
        lam = search.roots.front().lambda_s;
      }
      const IonizationVerdict v = verify_incomplete_ionization(ng_omega, ng_r, lam, ng_T, ng_h);
      CsvTable t;
      t.header = {"t", "P"};
      for (size_t i = 0; i < v.t.size(); ++i) t.rows.push_back({v.t[i], v.P[i]});
      t.write(out_dir + "/plateau.csv");
      std::cout << "lambda = " << format_g17(lam) << "\nP floor (final quarter) = "
                << format_g17(v.P_floor) << "\n|theta| band = [" << format_g17(v.band_lo)
                << ", " << format_g17(v.band_hi) << "] stable: " << (v.band_stable ? "yes" : "no")
                << "\n";
      return 0;
    }
    if (preset_cmd->parsed()) {
      const int rc = run_preset(preset_name, out_dir, jobs, preset_svg);
      std::ifstream f(out_dir + "/summary.txt");
      std::cout << f.rdbuf();
      return rc;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
