#include "doctest.h"

#include <vector>

#include "meiperf/audio.hpp"
#include "meiperf/errors.hpp"
#include "oracles.hpp"

using namespace meiperf;

namespace {

std::vector<uint8_t> as_bytes(const std::string& s) {
    return std::vector<uint8_t>(s.begin(), s.end());
}

} // namespace

TEST_CASE("float32 wav round trip") {
    const std::vector<double> samples = {0.0, 0.5, -0.5, 1.0, -1.0, 0.25};
    const auto bytes = as_bytes(oracle::wav_bytes_f32(samples, 44100));
    const AudioBuffer a = parse_wav(bytes, "test");
    CHECK(a.sample_rate_hz == doctest::Approx(44100.0));
    REQUIRE(a.samples.size() == samples.size());
    for (size_t i = 0; i < samples.size(); ++i)
        CHECK(a.samples[i] == doctest::Approx(samples[i]).epsilon(1e-6));
}

TEST_CASE("pcm16 wav decodes to full scale") {
    const std::vector<double> samples = {0.0, 0.5, -0.5, 1.0, -1.0};
    const auto bytes = as_bytes(oracle::wav_bytes_pcm16(samples, 22050));
    const AudioBuffer a = parse_wav(bytes, "test");
    CHECK(a.sample_rate_hz == doctest::Approx(22050.0));
    REQUIRE(a.samples.size() == samples.size());
    for (size_t i = 0; i < samples.size(); ++i)
        CHECK(a.samples[i] == doctest::Approx(samples[i]).epsilon(2e-4));
}

TEST_CASE("stereo mixes to mono by averaging") {
    // interleaved L R pairs: (1.0, 0.0), (0.5, -0.5)
    const std::vector<double> interleaved = {1.0, 0.0, 0.5, -0.5};
    const auto bytes = as_bytes(oracle::wav_bytes_f32(interleaved, 44100, 2));
    const AudioBuffer a = parse_wav(bytes, "test");
    REQUIRE(a.samples.size() == 2);
    CHECK(a.samples[0] == doctest::Approx(0.5));
    CHECK(a.samples[1] == doctest::Approx(0.0));
}

TEST_CASE("malformed and unsupported wavs raise IoError") {
    CHECK_THROWS_AS(parse_wav(as_bytes("not a wav at all"), "bad"), IoError);
    // 8-bit PCM is not supported
    const std::vector<double> one = {0.0};
    std::string b = oracle::wav_bytes_pcm16(one, 44100);
    b[34] = 8; // bits per sample
    CHECK_THROWS_AS(parse_wav(as_bytes(b), "bad"), IoError);
    CHECK_THROWS_AS(load_wav("/nonexistent/file.wav"), IoError);
}
