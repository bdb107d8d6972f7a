#include "fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace meiperf::detail {

void fft_in_place(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (!std::has_single_bit(n))
        throw std::invalid_argument("fft size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<double> rfft_magnitudes(std::span<const double> frame, std::size_t fft_len) {
    if (frame.size() > fft_len)
        throw std::invalid_argument("frame longer than fft length");
    std::vector<std::complex<double>> buf(fft_len, {0.0, 0.0});
    for (std::size_t i = 0; i < frame.size(); ++i)
        buf[i] = {frame[i], 0.0};
    fft_in_place(buf);
    std::vector<double> mags(fft_len / 2 + 1);
    for (std::size_t k = 0; k < mags.size(); ++k)
        mags[k] = std::abs(buf[k]);
    return mags;
}

} // namespace meiperf::detail
