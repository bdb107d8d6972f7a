#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "meiperf/dsp.hpp"
#include "meiperf/errors.hpp"
#include "oracles.hpp"

using namespace meiperf;

namespace {

AudioBuffer buffer(std::vector<double> samples, double sr = 44100.0) {
    return AudioBuffer{std::move(samples), sr};
}

TranscribedNote note(double onset, double dur, double f0, const char* id = "n1") {
    return TranscribedNote{id, onset, dur, f0};
}

// |a - b| <= tol * max(|a|, |b|), with a small absolute floor for values
// that are themselves numerically zero
bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + 1e-12;
}

} // namespace

TEST_CASE("frame_note lays centers at onset + (k+1/2)*hop") {
    const AudioBuffer a = buffer(oracle::silence(44100, 1.0));
    AnalysisConfig cfg;

    const FrameGrid g = frame_note(a, note(0.0, 0.1, 440), cfg);
    REQUIRE(g.count() == 10);
    for (size_t k = 0; k < 10; ++k)
        CHECK(g.frame_times_s[k] ==
              doctest::Approx(0.005 + 0.01 * static_cast<double>(k)).epsilon(1e-12));
    CHECK(g.hop_s == doctest::Approx(0.01));

    // spacing and region containment
    for (size_t k = 1; k < g.count(); ++k)
        CHECK(g.frame_times_s[k] - g.frame_times_s[k - 1] == doctest::Approx(0.01).epsilon(1e-9));
    for (double t : g.frame_times_s) {
        CHECK(t >= 0.0);
        CHECK(t < 0.1);
    }
}

TEST_CASE("frame_note degenerate and error cases") {
    const AudioBuffer a = buffer(oracle::silence(44100, 1.0));
    AnalysisConfig cfg;

    const FrameGrid g = frame_note(a, note(0.2, 0.004, 440), cfg);
    REQUIRE(g.count() == 1);
    CHECK(g.frame_times_s[0] == doctest::Approx(0.202).epsilon(1e-12));

    CHECK_THROWS_AS(frame_note(a, note(2.0, 0.5, 440), cfg), ValidationError);
    CHECK_THROWS_AS(frame_note(a, note(0.8, 0.5, 440), cfg), ValidationError);

    AnalysisConfig wrong_rate = cfg;
    wrong_rate.sample_rate_hz = 48000;
    CHECK_THROWS_AS(frame_note(a, note(0.0, 0.1, 440), wrong_rate), ValidationError);
}

TEST_CASE("frame_spectrum: all-zero audio gives an all-zero spectrum") {
    const AudioBuffer a = buffer(oracle::silence(44100, 0.5));
    AnalysisConfig cfg;
    const std::vector<double> spec = frame_spectrum(a, 0.25, cfg);
    REQUIRE(spec.size() == static_cast<size_t>(cfg.fft_len / 2 + 1));
    for (double m : spec)
        CHECK(m == 0.0);
}

TEST_CASE("frame_spectrum: DC concentrates in bin 0") {
    const AudioBuffer a = buffer(std::vector<double>(44100, 1.0));
    AnalysisConfig cfg;
    const std::vector<double> spec = frame_spectrum(a, 0.5, cfg);
    double above3 = 0.0;
    for (size_t k = 4; k < spec.size(); ++k)
        above3 = std::max(above3, spec[k]);
    CHECK(spec[0] > 100.0 * above3);
}

TEST_CASE("frame_spectrum matches a direct DFT oracle") {
    const AudioBuffer a = buffer(oracle::sine(44100, 0.5, 997.0, 0.8, 0.3));
    AnalysisConfig cfg;
    const double center = 0.25;
    const std::vector<double> impl = frame_spectrum(a, center, cfg);

    // independently windowed frame: same published extraction rule
    const long long c = static_cast<long long>(std::floor(center * 44100.0 + 0.5 + 1e-6));
    std::vector<double> frame(static_cast<size_t>(cfg.window_len), 0.0);
    for (int i = 0; i < cfg.window_len; ++i) {
        const long long idx = c - cfg.window_len / 2 + i;
        if (idx >= 0 && idx < static_cast<long long>(a.samples.size()))
            frame[static_cast<size_t>(i)] =
                a.samples[static_cast<size_t>(idx)] *
                (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / cfg.window_len));
    }
    const std::vector<double> ref = oracle::naive_dft_mags(frame, static_cast<size_t>(cfg.fft_len));

    REQUIRE(impl.size() == ref.size());
    double max_ref = 0.0;
    for (double m : ref)
        max_ref = std::max(max_ref, m);
    for (size_t k = 0; k < impl.size(); ++k)
        CHECK(std::abs(impl[k] - ref[k]) <= 1e-8 * max_ref);
}

TEST_CASE("frame_spectrum: 1 kHz sine peaks within one bin of 1 kHz") {
    const AudioBuffer a = buffer(oracle::sine(44100, 0.5, 1000.0, 1.0));
    AnalysisConfig cfg;
    const std::vector<double> spec = frame_spectrum(a, 0.25, cfg);
    const size_t argmax =
        static_cast<size_t>(std::max_element(spec.begin(), spec.end()) - spec.begin());
    const double bin_hz = 44100.0 / cfg.fft_len;
    CHECK(std::abs(static_cast<double>(argmax) * bin_hz - 1000.0) <= bin_hz);
}

TEST_CASE("frame_power_db reference levels") {
    AnalysisConfig cfg;
    const AudioBuffer full = buffer(oracle::sine(44100, 0.5, 1000.0, 1.0));
    CHECK(std::abs(frame_power_db(full, 0.25, cfg) - (-3.01)) <= 0.1);

    const AudioBuffer half = buffer(oracle::sine(44100, 0.5, 1000.0, 0.5));
    CHECK(std::abs(frame_power_db(half, 0.25, cfg) - (-9.03)) <= 0.1);

    const AudioBuffer quiet = buffer(oracle::silence(44100, 0.5));
    CHECK(frame_power_db(quiet, 0.25, cfg) == -120.0);
}

TEST_CASE("track_f0: pure sine stays within 2 cents of 440") {
    const AudioBuffer a = buffer(oracle::sine(44100, 1.0, 440.0, 0.9));
    AnalysisConfig cfg;
    const TranscribedNote n = note(0.0, 1.0, 440.0);
    const FrameGrid g = frame_note(a, n, cfg);
    const auto f0 = track_f0(a, n, g, cfg);
    REQUIRE(f0.size() == g.count());
    for (const auto& f : f0) {
        REQUIRE(f.has_value());
        CHECK(std::abs(1200.0 * std::log2(*f / 440.0)) < 2.0);
    }
}

TEST_CASE("track_f0: sawtooth stays inside the search band, never the octave") {
    const AudioBuffer a = buffer(oracle::sawtooth(44100, 1.0, 220.0, 0.8));
    AnalysisConfig cfg;
    const TranscribedNote n = note(0.0, 1.0, 220.0);
    const FrameGrid g = frame_note(a, n, cfg);
    const auto f0 = track_f0(a, n, g, cfg);
    const double lo = 220.0 * std::pow(2.0, -3.0 / 12.0); // 184.997
    const double hi = 220.0 * std::pow(2.0, 3.0 / 12.0);  // 261.626
    for (const auto& f : f0) {
        REQUIRE(f.has_value());
        CHECK(*f >= lo - 1e-9);
        CHECK(*f <= hi + 1e-9);
        CHECK(std::abs(1200.0 * std::log2(*f / 220.0)) < 5.0);
    }
}

TEST_CASE("track_f0: white noise is mostly unvoiced") {
    const AudioBuffer a = buffer(oracle::white_noise(44100, 1.0, 0.5, 1234));
    AnalysisConfig cfg;
    const TranscribedNote n = note(0.0, 1.0, 440.0);
    const FrameGrid g = frame_note(a, n, cfg);
    const auto f0 = track_f0(a, n, g, cfg);
    size_t nulls = 0;
    for (const auto& f : f0)
        if (!f)
            ++nulls;
    CHECK(static_cast<double>(nulls) >= 0.9 * static_cast<double>(f0.size()));
}

TEST_CASE("spectral_centroid basics") {
    std::vector<double> spec(10, 0.0);
    std::vector<double> freqs(10);
    for (size_t k = 0; k < 10; ++k)
        freqs[k] = static_cast<double>(k) * 500.0;

    spec[2] = 3.0; // single bin at 1000 Hz
    CHECK(spectral_centroid(spec, freqs).value() == doctest::Approx(1000.0));

    std::fill(spec.begin(), spec.end(), 0.0);
    spec[1] = 2.0; // 500 Hz
    spec[3] = 2.0; // 1500 Hz
    CHECK(spectral_centroid(spec, freqs).value() == doctest::Approx(1000.0));

    std::fill(spec.begin(), spec.end(), 0.0);
    CHECK(!spectral_centroid(spec, freqs).has_value());
}

TEST_CASE("spectral_centroid of a 440 Hz sine frame") {
    const AudioBuffer a = buffer(oracle::sine(44100, 0.5, 440.0, 1.0));
    AnalysisConfig cfg;
    const std::vector<double> spec = frame_spectrum(a, 0.25, cfg);
    const std::vector<double> freqs = bin_frequencies(cfg);
    CHECK(std::abs(spectral_centroid(spec, freqs).value() - 440.0) <= 10.0);
}

TEST_CASE("spectral_flux basics") {
    std::vector<double> a = {1.0, 2.0, 3.0};
    CHECK(spectral_flux(a, a) == doctest::Approx(0.0));
    CHECK(spectral_flux(a, {}) == 0.0); // first frame convention

    std::vector<double> from = {1.0, 0.0, 0.0};
    std::vector<double> to = {0.0, 0.0, 5.0};
    CHECK(spectral_flux(to, from) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));

    std::vector<double> zeros = {0.0, 0.0, 0.0};
    CHECK(spectral_flux(zeros, zeros) == doctest::Approx(0.0));
    CHECK(spectral_flux(to, zeros) == doctest::Approx(1.0)); // unit mass appears
}

TEST_CASE("spectral_slope basics") {
    std::vector<double> freqs(64);
    for (size_t k = 0; k < freqs.size(); ++k)
        freqs[k] = static_cast<double>(k) * 100.0;

    std::vector<double> flat(64, 0.7);
    CHECK(spectral_slope(flat, freqs).value() == doctest::Approx(0.0));

    // exact linear decay: m_k = c - a*f_k, normalized slope is -a / sum(m)
    const double c = 1.0, slope_a = 1.0 / 6300.0;
    std::vector<double> linear(64);
    double total = 0.0;
    for (size_t k = 0; k < 64; ++k) {
        linear[k] = c - slope_a * freqs[k];
        total += linear[k];
    }
    CHECK(spectral_slope(linear, freqs).value() ==
          doctest::Approx(-slope_a / total).epsilon(1e-9));

    std::vector<double> zeros(64, 0.0);
    CHECK(!spectral_slope(zeros, freqs).has_value());
}

TEST_CASE("spectral_slope of averaged white-noise frames is near zero") {
    AnalysisConfig cfg;
    const AudioBuffer a = buffer(oracle::white_noise(44100, 1.5, 0.5, 77));
    const std::vector<double> freqs = bin_frequencies(cfg);
    double mean_slope = 0.0;
    int count = 0;
    for (double t = 0.05; t < 1.45 && count < 120; t += 0.01, ++count)
        mean_slope += spectral_slope(frame_spectrum(a, t, cfg), freqs).value();
    mean_slope /= count;
    REQUIRE(count >= 100);
    CHECK(std::abs(mean_slope) < 1e-7);
}

TEST_CASE("spectral_flatness basics") {
    std::vector<double> flat(128, 0.42);
    CHECK(spectral_flatness(flat).value() == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<double> single(128, 0.0);
    single[5] = 1.0;
    CHECK(spectral_flatness(single).value() < 0.01);

    std::vector<double> zeros(128, 0.0);
    CHECK(!spectral_flatness(zeros).has_value());
}

TEST_CASE("spectral_flatness of white noise approaches exp(-gamma)") {
    AnalysisConfig cfg;
    const AudioBuffer a = buffer(oracle::white_noise(44100, 2.5, 0.5, 991));
    double mean_flatness = 0.0;
    int count = 0;
    for (double t = 0.05; t < 2.45 && count < 220; t += 0.01, ++count) {
        std::vector<double> spec = frame_spectrum(a, t, cfg);
        for (double& m : spec)
            m *= m;
        mean_flatness += spectral_flatness(spec).value();
    }
    mean_flatness /= count;
    REQUIRE(count >= 200);
    CHECK(std::abs(mean_flatness - 0.56) <= 0.08);
}

TEST_CASE("analyze_note: steady sine") {
    // note embedded in longer audio so no analysis window crosses the file edge
    const AudioBuffer a = buffer(oracle::sine(44100, 1.2, 440.0, 0.9));
    AnalysisConfig cfg;
    const DescriptorFrameSeries s = analyze_note(a, note(0.1, 1.0, 440.0), cfg);

    const size_t n = s.grid.count();
    REQUIRE(n == 100);
    CHECK(s.f0_hz.size() == n);
    CHECK(s.power_db.size() == n);
    CHECK(s.spectral_centroid_hz.size() == n);
    CHECK(s.spectral_flux.size() == n);
    CHECK(s.spectral_slope.size() == n);
    CHECK(s.spectral_flatness.size() == n);

    for (size_t k = 0; k < n; ++k) {
        REQUIRE(s.f0_hz[k].has_value());
        CHECK(std::abs(1200.0 * std::log2(*s.f0_hz[k] / 440.0)) < 2.0);
        REQUIRE(s.spectral_flatness[k].has_value());
        CHECK(*s.spectral_flatness[k] < 0.1);
        REQUIRE(s.spectral_flux[k].has_value());
        if (k == 0)
            CHECK(*s.spectral_flux[k] == 0.0);
        else
            CHECK(*s.spectral_flux[k] < 0.01);
    }
}

TEST_CASE("analyze_note: silence") {
    const AudioBuffer a = buffer(oracle::silence(44100, 1.0));
    AnalysisConfig cfg;
    const DescriptorFrameSeries s = analyze_note(a, note(0.1, 0.5, 440.0), cfg);
    for (size_t k = 0; k < s.grid.count(); ++k) {
        CHECK(!s.f0_hz[k].has_value());
        CHECK(s.power_db[k] == -120.0);
        CHECK(!s.spectral_centroid_hz[k].has_value());
        CHECK(!s.spectral_flux[k].has_value());
        CHECK(!s.spectral_slope[k].has_value());
        CHECK(!s.spectral_flatness[k].has_value());
    }
}

TEST_CASE("analyze_note: 0.05 s note at 10 ms hop has 5 frames") {
    const AudioBuffer a = buffer(oracle::sine(44100, 1.0, 440.0, 0.5));
    AnalysisConfig cfg;
    const DescriptorFrameSeries s = analyze_note(a, note(0.2, 0.05, 440.0), cfg);
    CHECK(s.grid.count() == 5);
    CHECK(s.f0_hz.size() == 5);
    CHECK(s.power_db.size() == 5);
    CHECK(s.spectral_centroid_hz.size() == 5);
    CHECK(s.spectral_flux.size() == 5);
    CHECK(s.spectral_slope.size() == 5);
    CHECK(s.spectral_flatness.size() == 5);
}

TEST_CASE("amplitude invariance: only power moves under gain") {
    AnalysisConfig cfg;
    const std::vector<double> base = oracle::sine(44100, 0.6, 330.0, 0.4);
    const double g = 0.35;
    std::vector<double> scaled = base;
    for (double& v : scaled)
        v *= g;

    const TranscribedNote n = note(0.05, 0.5, 330.0);
    const DescriptorFrameSeries s1 = analyze_note(buffer(base), n, cfg);
    const DescriptorFrameSeries s2 = analyze_note(buffer(scaled), n, cfg);

    const double expected_shift = 20.0 * std::log10(g);
    REQUIRE(s1.grid.count() == s2.grid.count());
    for (size_t k = 0; k < s1.grid.count(); ++k) {
        CHECK(std::abs(s2.power_db[k] - s1.power_db[k] - expected_shift) <= 1e-6);
        REQUIRE(s1.f0_hz[k].has_value() == s2.f0_hz[k].has_value());
        if (s1.f0_hz[k])
            CHECK(rel_close(*s2.f0_hz[k], *s1.f0_hz[k], 1e-6));
        CHECK(rel_close(*s2.spectral_centroid_hz[k], *s1.spectral_centroid_hz[k], 1e-6));
        CHECK(rel_close(*s2.spectral_flux[k], *s1.spectral_flux[k], 1e-6));
        CHECK(rel_close(*s2.spectral_slope[k], *s1.spectral_slope[k], 1e-6));
        CHECK(rel_close(*s2.spectral_flatness[k], *s1.spectral_flatness[k], 1e-6));
    }
}

TEST_CASE("time-shift equivariance by whole hops") {
    AnalysisConfig cfg;
    const std::vector<double> base = oracle::sine(44100, 0.6, 523.25, 0.6);
    const int shift_hops = 7;
    const size_t shift_samples = static_cast<size_t>(shift_hops * 441);
    std::vector<double> shifted(shift_samples, 0.0);
    shifted.insert(shifted.end(), base.begin(), base.end());

    const TranscribedNote n1 = note(0.05, 0.4, 523.25);
    const TranscribedNote n2 = note(0.05 + shift_hops * 0.01, 0.4, 523.25);
    const DescriptorFrameSeries s1 = analyze_note(buffer(base), n1, cfg);
    const DescriptorFrameSeries s2 = analyze_note(buffer(shifted), n2, cfg);

    REQUIRE(s1.grid.count() == s2.grid.count());
    for (size_t k = 0; k < s1.grid.count(); ++k) {
        CHECK(std::abs(s2.power_db[k] - s1.power_db[k]) <= 1e-9);
        REQUIRE(s1.f0_hz[k].has_value() == s2.f0_hz[k].has_value());
        if (s1.f0_hz[k])
            CHECK(std::abs(*s2.f0_hz[k] - *s1.f0_hz[k]) <= 1e-9);
        CHECK(std::abs(*s2.spectral_centroid_hz[k] - *s1.spectral_centroid_hz[k]) <= 1e-9);
        CHECK(std::abs(*s2.spectral_flux[k] - *s1.spectral_flux[k]) <= 1e-9);
        CHECK(std::abs(*s2.spectral_slope[k] - *s1.spectral_slope[k]) <= 1e-9);
        CHECK(std::abs(*s2.spectral_flatness[k] - *s1.spectral_flatness[k]) <= 1e-9);
    }
}

TEST_CASE("descriptor ranges on random frames") {
    AnalysisConfig cfg;
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> freq(80.0, 8000.0);
    std::uniform_real_distribution<double> amp(0.05, 0.9);
    const std::vector<double> freqs = bin_frequencies(cfg);
    const double nyquist = cfg.sample_rate_hz / 2.0;

    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> mix = oracle::white_noise(44100, 0.3, amp(rng) * 0.2,
                                                      static_cast<uint32_t>(trial * 31 + 1));
        const std::vector<double> tone = oracle::sine(44100, 0.3, freq(rng), amp(rng));
        for (size_t i = 0; i < mix.size(); ++i)
            mix[i] += tone[i];
        const DescriptorFrameSeries s =
            analyze_note(buffer(mix), note(0.0, 0.3, 440.0), cfg);
        for (size_t k = 0; k < s.grid.count(); ++k) {
            CHECK(s.power_db[k] <= 0.5);
            CHECK(s.power_db[k] >= -120.0);
            if (s.spectral_flatness[k]) {
                CHECK(*s.spectral_flatness[k] >= 0.0);
                CHECK(*s.spectral_flatness[k] <= 1.0);
            }
            if (s.spectral_flux[k]) {
                CHECK(*s.spectral_flux[k] >= 0.0);
                CHECK(*s.spectral_flux[k] <= std::numbers::sqrt2);
            }
            if (s.spectral_centroid_hz[k]) {
                CHECK(*s.spectral_centroid_hz[k] >= 0.0);
                CHECK(*s.spectral_centroid_hz[k] <= nyquist);
            }
        }
    }
}
