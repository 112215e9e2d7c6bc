#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qlni {

/// In-place radix-2 FFT; the size must be a power of two. The inverse
/// transform includes the 1/n normalization.
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse = false);

std::size_t next_power_of_two(std::size_t n);

}  // namespace qlni
