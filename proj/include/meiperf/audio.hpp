#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace meiperf {

/// Mono audio at a known sample rate. Stereo sources are mixed down by
/// channel averaging on load. Samples are full-scale normalized to [-1, 1]
/// for integer PCM sources.
struct AudioBuffer {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;

    double duration_s() const {
        return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
    }
};

/// Decode a RIFF/WAVE byte stream: PCM 16-bit or IEEE float 32-bit, mono
/// or stereo. `name` is used in error messages. Throws IoError on
/// malformed or unsupported files.
AudioBuffer parse_wav(std::span<const std::uint8_t> bytes, const std::string& name);

/// Read and decode a WAV file. Throws IoError.
AudioBuffer load_wav(const std::string& path);

} // namespace meiperf
