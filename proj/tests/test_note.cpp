#include "doctest.h"

#include <cmath>
#include <random>

#include "meiperf/errors.hpp"
#include "meiperf/note.hpp"

using namespace meiperf;

TEST_CASE("midi_from_hz reference points") {
    CHECK(midi_from_hz(440.0) == doctest::Approx(69.0).epsilon(1e-12));
    CHECK(midi_from_hz(261.6256) == doctest::Approx(60.0).epsilon(1e-3));
    CHECK(midi_from_hz(466.1638) == doctest::Approx(70.0).epsilon(1e-3));
    CHECK_THROWS_AS(midi_from_hz(0.0), std::domain_error);
    CHECK_THROWS_AS(midi_from_hz(-1.0), std::domain_error);
}

TEST_CASE("note_name_from_midi reference points") {
    CHECK(note_name_from_midi(69) == NoteName{'a', Accidental::Natural, 4});
    CHECK(note_name_from_midi(70) == NoteName{'a', Accidental::Sharp, 4});
    CHECK(note_name_from_midi(60) == NoteName{'c', Accidental::Natural, 4});
    CHECK(note_name_from_midi(0) == NoteName{'c', Accidental::Natural, -1});
    CHECK(note_name_from_midi(127) == NoteName{'g', Accidental::Natural, 9});
    CHECK_THROWS_AS(note_name_from_midi(-1), std::domain_error);
    CHECK_THROWS_AS(note_name_from_midi(128), std::domain_error);
}

TEST_CASE("cents_between reference points") {
    CHECK(cents_between(440.0, 440.0) == doctest::Approx(0.0));
    CHECK(cents_between(440.0, 466.1638) == doctest::Approx(100.0).epsilon(1e-4));
    CHECK(cents_between(440.0, 880.0) == doctest::Approx(1200.0).epsilon(1e-12));
    CHECK_THROWS_AS(cents_between(0.0, 440.0), std::domain_error);
}

TEST_CASE("midi round trip over the full range") {
    for (int m = 0; m <= 127; ++m) {
        const double hz = 440.0 * std::pow(2.0, (m - 69) / 12.0);
        CHECK(midi_from_hz(hz) == doctest::Approx(static_cast<double>(m)).epsilon(1e-9));
        const NoteName name = note_name_from_midi(m);
        CHECK(midi_from_note_name(name) == m);
        CHECK(name.octave == m / 12 - 1);
    }
}

TEST_CASE("cents_between antisymmetry") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> freq(20.0, 8000.0);
    for (int i = 0; i < 200; ++i) {
        const double f1 = freq(rng);
        const double f2 = freq(rng);
        CHECK(cents_between(f1, f2) == doctest::Approx(-cents_between(f2, f1)).epsilon(1e-12));
    }
}

TEST_CASE("note name rendering") {
    CHECK(to_string(NoteName{'a', Accidental::Natural, 4}) == "A4");
    CHECK(to_string(NoteName{'a', Accidental::Sharp, 4}) == "A#4");
    CHECK(to_string(NoteName{'b', Accidental::Flat, 3}) == "Bb3");
}

TEST_CASE("flat spellings map back to the same midi number") {
    CHECK(midi_from_note_name(NoteName{'b', Accidental::Flat, 4}) ==
          midi_from_note_name(NoteName{'a', Accidental::Sharp, 4}));
}

TEST_CASE("analysis config invariants") {
    AnalysisConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    AnalysisConfig bad = cfg;
    bad.window_len = 4096; // > fft_len
    CHECK_THROWS_AS(bad.validate(), UsageError);

    bad = cfg;
    bad.hop_s = 0.0;
    CHECK_THROWS_AS(bad.validate(), UsageError);

    bad = cfg;
    bad.fft_len = 1000; // not a power of two
    CHECK_THROWS_AS(bad.validate(), UsageError);

    bad = cfg;
    bad.vibrato_band_hi_hz = 60.0; // above 1/(2*hop)
    CHECK_THROWS_AS(bad.validate(), UsageError);

    bad = cfg;
    bad.vibrato_band_lo_hz = 0.0;
    CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("note names outside midi range are rejected") {
    CHECK_THROWS_AS(midi_from_note_name(NoteName{'b', Accidental::Sharp, 9}), std::domain_error);
    CHECK_THROWS_AS(midi_from_note_name(NoteName{'c', Accidental::Flat, -1}), std::domain_error);
    CHECK_THROWS_AS(midi_from_note_name(NoteName{'x', Accidental::Natural, 4}), std::domain_error);
    CHECK_THROWS_AS(midi_from_note_name(NoteName{'c', Accidental::Natural, 10}), std::domain_error);
}
