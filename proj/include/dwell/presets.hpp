#pragma once

#include <string>

namespace dwell {

// Named experiment presets. Each writes CSV artifacts plus a summary.txt with
// measured quantities and pass/fail lines against the acceptance constants.
// Returns 0 when every threshold in the preset passed, 2 otherwise.
// Known names: fermi-scaling, tail, figure1, figure2, overlap.
int run_preset(const std::string& name, const std::string& out_dir, int jobs = 1,
               bool svg = false);

}  // namespace dwell
