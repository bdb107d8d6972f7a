#pragma once

#include <complex>
#include <span>
#include <vector>

namespace meiperf::detail {

/// In-place iterative radix-2 FFT. Size must be a power of two.
/// Fixed operation order keeps results bit-stable across platforms.
void fft_in_place(std::vector<std::complex<double>>& a);

/// Magnitude spectrum of a real frame zero-padded to fft_len:
/// fft_len/2 + 1 nonnegative bins.
std::vector<double> rfft_magnitudes(std::span<const double> frame, std::size_t fft_len);

} // namespace meiperf::detail
