#include "meiperf/audio.hpp"

#include <cstring>
#include <fstream>

#include "meiperf/errors.hpp"

namespace meiperf {

namespace {

uint16_t read_u16(std::span<const uint8_t> b, size_t off) {
    return static_cast<uint16_t>(b[off] | (b[off + 1] << 8));
}

uint32_t read_u32(std::span<const uint8_t> b, size_t off) {
    return static_cast<uint32_t>(b[off]) | (static_cast<uint32_t>(b[off + 1]) << 8) |
           (static_cast<uint32_t>(b[off + 2]) << 16) | (static_cast<uint32_t>(b[off + 3]) << 24);
}

int16_t read_i16(std::span<const uint8_t> b, size_t off) {
    return static_cast<int16_t>(b[off] | (b[off + 1] << 8));
}

float read_f32(std::span<const uint8_t> b, size_t off) {
    uint32_t bits = read_u32(b, off);
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

} // namespace

AudioBuffer parse_wav(std::span<const uint8_t> bytes, const std::string& name) {
    auto fail = [&](const std::string& why) -> IoError {
        return IoError(name + ": " + why);
    };
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw fail("not a RIFF/WAVE file");

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    bool have_fmt = false;
    std::span<const uint8_t> data;

    size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        uint32_t size = read_u32(bytes, pos + 4);
        pos += 8;
        if (size > bytes.size() - pos)
            throw fail("truncated chunk");
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16)
                throw fail("fmt chunk too short");
            format = read_u16(bytes, pos);
            channels = read_u16(bytes, pos + 2);
            rate = read_u32(bytes, pos + 4);
            bits = read_u16(bytes, pos + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.subspan(pos, size);
        }
        pos += size + (size & 1); // chunks are word-aligned
    }

    if (!have_fmt || data.empty())
        throw fail("missing fmt or data chunk");
    if (channels < 1 || channels > 2)
        throw fail("unsupported channel count " + std::to_string(channels));
    const bool pcm16 = format == 1 && bits == 16;
    const bool f32 = format == 3 && bits == 32;
    if (!pcm16 && !f32)
        throw fail("unsupported sample format (need PCM 16-bit or float 32-bit)");

    const size_t bytes_per_sample = bits / 8;
    const size_t stride = bytes_per_sample * channels;
    const size_t frames = data.size() / stride;

    AudioBuffer out;
    out.sample_rate_hz = static_cast<double>(rate);
    out.samples.resize(frames);
    for (size_t i = 0; i < frames; ++i) {
        double acc = 0.0;
        for (size_t c = 0; c < channels; ++c) {
            size_t off = i * stride + c * bytes_per_sample;
            acc += pcm16 ? read_i16(data, off) / 32768.0 : static_cast<double>(read_f32(data, off));
        }
        out.samples[i] = acc / channels;
    }
    return out;
}

AudioBuffer load_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open audio file '" + path + "'");
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (!f.good() && !f.eof())
        throw IoError("failed reading audio file '" + path + "'");
    return parse_wav(bytes, path);
}

} // namespace meiperf
