#pragma once

#include <string>

namespace meiperf {

enum class Accidental { Natural, Sharp, Flat };

/// Scientific pitch notation note name. C4 = middle C = MIDI 60.
struct NoteName {
    char pname = 'c'; // one of c d e f g a b
    Accidental accidental = Accidental::Natural;
    int octave = 4; // [-1, 9]

    bool operator==(const NoteName&) const = default;
};

/// One row of a note transcription: where the note sits in the audio and
/// the single frequency the transcriber assigned to it.
struct TranscribedNote {
    std::string id; // empty until assign_ids(); XML-id-safe afterwards
    double onset_s = 0.0;
    double duration_s = 0.0;
    double nominal_f0_hz = 0.0;
};

/// Analysis parameters shared by the whole descriptor pipeline.
struct AnalysisConfig {
    double sample_rate_hz = 44100.0;
    int window_len = 2048; // Hann window, samples
    int fft_len = 2048;    // power of two, >= window_len
    double hop_s = 0.010;
    double f0_search_semitones = 3.0;  // half-width of the f0 search band
    double voicing_threshold = 0.3;    // peak normalized autocorrelation gate
    double vibrato_min_dur_s = 0.25;   // minimum voiced span for vibrato
    double vibrato_band_lo_hz = 3.0;
    double vibrato_band_hi_hz = 9.0;
    double silence_floor_db = -120.0;

    /// Throws UsageError when any invariant is violated.
    void validate() const;
};

/// 69 + 12*log2(f/440). Throws std::domain_error for f <= 0.
double midi_from_hz(double f);

/// 440 * 2^((m-69)/12).
double hz_from_midi(double m);

/// Decompose an integer MIDI number into a note name. Chromatic notes are
/// spelled as sharps. Throws std::domain_error outside [0, 127].
NoteName note_name_from_midi(int m);

/// Inverse of note_name_from_midi (accepts flat spellings too).
/// Throws std::domain_error when the name falls outside MIDI [0, 127].
int midi_from_note_name(const NoteName& n);

/// 1200 * log2(f2/f1). Throws std::domain_error for non-positive input.
double cents_between(double f1, double f2);

/// "A4", "A#4", "Bb3".
std::string to_string(const NoteName& n);

const char* to_string(Accidental a); // "natural" | "sharp" | "flat"

} // namespace meiperf
