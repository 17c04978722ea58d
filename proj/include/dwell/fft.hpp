#pragma once

#include <vector>

#include "dwell/branch.hpp"

namespace dwell {

// In-place iterative radix-2 FFT. Size must be a power of two.
// sign = -1: forward (sum x_k e^{-2pi i k m / N}), sign = +1: inverse kernel
// without the 1/N normalization.
void fft_radix2(std::vector<cplx>& data, int sign);

bool is_power_of_two(size_t n);
size_t next_power_of_two(size_t n);

}  // namespace dwell
