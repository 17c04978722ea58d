#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dwell/forcing.hpp"
#include "dwell/volterra.hpp"

namespace dwell {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `key = value` text with '#' comments. Keeps line numbers for
// diagnostics; duplicate keys are an error naming both lines.
struct FlatConfig {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, Entry> entries;

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  int get_int_or(const std::string& key, int fallback) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
};

FlatConfig parse_flat_config(const std::string& text);
FlatConfig load_flat_config(const std::string& path);

// Builds a ForcingSpec from config keys (omega, form, r, lambda, c_re_k/c_im_k)
// and rejects unknown keys with their line numbers.
ForcingSpec forcing_from_config(const FlatConfig& cfg);

// Experiment configuration for the CLI: forcing keys plus solver parameters.
// `initial_state` is either "bound" or the path of a CSV (k, re_Theta0,
// im_Theta0) holding the continuum amplitudes on a symmetric k-grid, with
// theta0_re/theta0_im giving the bound amplitude; the normalization
// |theta0|^2 + int |Theta0|^2 dk = 1 is enforced on load.
struct ExperimentConfig {
  ForcingSpec forcing;
  std::string initial_state = "bound";
  double theta0_re = 1.0, theta0_im = 0.0;
  double T = 50.0;
  double h = 5e-3;
  int lattice_N = 64;
  double k_max = 0.0;  // 0 => automatic
  int k_points = 2048;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(const std::string& text);
};

// Resolves the configured initial state ("bound" or a CSV path).
InitialState load_initial_state(const ExperimentConfig& cfg);

}  // namespace dwell
