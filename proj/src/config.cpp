#include "dwell/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace dwell {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

std::string FlatConfig::get(const std::string& key) const {
  auto it = entries.find(key);
  if (it == entries.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second.value;
}

double FlatConfig::get_double(const std::string& key) const {
  const auto it = entries.find(key);
  if (it == entries.end()) throw ConfigError("missing required key '" + key + "'");
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second.value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(it->second.line) + ": key '" + key +
                      "': not a decimal float: '" + it->second.value + "'");
  }
  if (pos != it->second.value.size())
    throw ConfigError("line " + std::to_string(it->second.line) + ": key '" + key +
                      "': trailing junk in '" + it->second.value + "'");
  return v;
}

double FlatConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int FlatConfig::get_int_or(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = get_double(key);
  const int n = static_cast<int>(v);
  if (static_cast<double>(n) != v)
    throw ConfigError("key '" + key + "': expected an integer, got " + get(key));
  return n;
}

std::string FlatConfig::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

FlatConfig parse_flat_config(const std::string& text) {
  FlatConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty value for key '" + key + "'");
    auto [it, inserted] = cfg.entries.emplace(key, FlatConfig::Entry{value, lineno});
    if (!inserted)
      throw ConfigError("duplicate key '" + key + "' on lines " +
                        std::to_string(it->second.line) + " and " + std::to_string(lineno));
  }
  return cfg;
}

FlatConfig load_flat_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_flat_config(ss.str());
}

namespace {

const char* kForcingKeys[] = {"omega", "form", "r", "lambda"};
const char* kSolverKeys[] = {"initial_state", "theta0_re", "theta0_im",
                             "T",             "h",         "lattice_N",
                             "k_max",         "k_points"};

bool is_coefficient_key(const std::string& key, int* index, bool* is_im) {
  auto parse_tail = [&](const std::string& tail) -> bool {
    if (tail.empty()) return false;
    for (char ch : tail)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    *index = std::stoi(tail);
    return true;
  };
  if (key.rfind("c_re_", 0) == 0) {
    *is_im = false;
    return parse_tail(key.substr(5));
  }
  if (key.rfind("c_im_", 0) == 0) {
    *is_im = true;
    return parse_tail(key.substr(5));
  }
  return false;
}

}  // namespace

ForcingSpec forcing_from_config(const FlatConfig& cfg) {
  // validate keys
  for (const auto& [key, entry] : cfg.entries) {
    bool known = false;
    for (const char* k : kForcingKeys)
      if (key == k) known = true;
    for (const char* k : kSolverKeys)
      if (key == k) known = true;
    int idx = 0;
    bool is_im = false;
    if (is_coefficient_key(key, &idx, &is_im)) {
      if (idx == 0)
        throw ConfigError("line " + std::to_string(entry.line) +
                          ": constant term c_0 must be zero (zero-mean drive); remove '" + key +
                          "'");
      known = true;
    }
    if (!known)
      throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
  }

  const double omega = cfg.get_double("omega");
  const std::string form = cfg.get_or("form", "harmonic-list");
  if (form == "geometric") {
    const double r = cfg.get_double("r");
    const double lambda = cfg.get_double("lambda");
    if (!(lambda > 0.0 && lambda < 1.0)) {
      const int line = cfg.entries.at("lambda").line;
      throw ConfigError("line " + std::to_string(line) + ": key 'lambda' out of range (0,1): " +
                        cfg.get("lambda"));
    }
    if (!(r > 0.0)) {
      const int line = cfg.entries.at("r").line;
      throw ConfigError("line " + std::to_string(line) + ": key 'r' must be positive");
    }
    return ForcingSpec::geometric(omega, r, lambda);
  }
  if (form != "harmonic-list")
    throw ConfigError("key 'form': expected 'harmonic-list' or 'geometric', got '" + form + "'");

  int max_idx = 0;
  for (const auto& [key, entry] : cfg.entries) {
    int idx = 0;
    bool is_im = false;
    if (is_coefficient_key(key, &idx, &is_im)) max_idx = std::max(max_idx, idx);
  }
  if (max_idx == 0) throw ConfigError("harmonic-list form needs at least one c_re_k/c_im_k key");
  std::vector<cplx> c(max_idx, cplx(0.0, 0.0));
  for (int k = 1; k <= max_idx; ++k) {
    const double re = cfg.get_double_or("c_re_" + std::to_string(k), 0.0);
    const double im = cfg.get_double_or("c_im_" + std::to_string(k), 0.0);
    c[k - 1] = cplx(re, im);
  }
  return ForcingSpec::harmonics(omega, std::move(c));
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  const FlatConfig cfg = parse_flat_config(text);
  ExperimentConfig e{forcing_from_config(cfg)};
  e.initial_state = cfg.get_or("initial_state", "bound");
  e.theta0_re = cfg.get_double_or("theta0_re", 1.0);
  e.theta0_im = cfg.get_double_or("theta0_im", 0.0);
  e.T = cfg.get_double_or("T", 50.0);
  e.h = cfg.get_double_or("h", 5e-3);
  e.lattice_N = cfg.get_int_or("lattice_N", 64);
  e.k_max = cfg.get_double_or("k_max", 0.0);
  e.k_points = cfg.get_int_or("k_points", 2048);
  if (!(e.T > 0.0)) throw ConfigError("key 'T' must be positive");
  if (!(e.h > 0.0)) throw ConfigError("key 'h' must be positive");
  return e;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return from_text(ss.str());
}

}  // namespace dwell
