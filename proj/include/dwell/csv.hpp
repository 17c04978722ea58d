#pragma once

#include <string>
#include <vector>

namespace dwell {

// CSV with a header row; numeric cells printed with 17 significant digits so
// that re-reading reproduces the doubles bit-exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void write(const std::string& path) const;
  static CsvTable read(const std::string& path);
};

std::string format_g17(double v);

}  // namespace dwell
