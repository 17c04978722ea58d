#include "dwell/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dwell {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("csv: cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
  f << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << format_g17(row[i]);
    f << "\n";
  }
  if (!f) throw std::runtime_error("csv: write failed: " + path);
}

CsvTable CsvTable::read(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("csv: cannot open: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("csv: empty file: " + path);
  {
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(is, cell, ',')) row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace dwell
