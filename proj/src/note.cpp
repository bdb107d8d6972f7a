#include "meiperf/note.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "meiperf/errors.hpp"

namespace meiperf {

namespace {

// semitone within the octave -> (letter, accidental), sharp spelling
constexpr struct {
    char pname;
    Accidental accidental;
} kChromatic[12] = {
    {'c', Accidental::Natural}, {'c', Accidental::Sharp}, {'d', Accidental::Natural},
    {'d', Accidental::Sharp},   {'e', Accidental::Natural}, {'f', Accidental::Natural},
    {'f', Accidental::Sharp},   {'g', Accidental::Natural}, {'g', Accidental::Sharp},
    {'a', Accidental::Natural}, {'a', Accidental::Sharp},   {'b', Accidental::Natural},
};

int letter_semitone(char pname) {
    switch (pname) {
    case 'c': return 0;
    case 'd': return 2;
    case 'e': return 4;
    case 'f': return 5;
    case 'g': return 7;
    case 'a': return 9;
    case 'b': return 11;
    default: throw std::domain_error(std::string("invalid pitch name '") + pname + "'");
    }
}

} // namespace

double midi_from_hz(double f) {
    if (!(f > 0.0))
        throw std::domain_error("frequency must be positive");
    return 69.0 + 12.0 * std::log2(f / 440.0);
}

double hz_from_midi(double m) {
    return 440.0 * std::pow(2.0, (m - 69.0) / 12.0);
}

NoteName note_name_from_midi(int m) {
    if (m < 0 || m > 127)
        throw std::domain_error("MIDI number " + std::to_string(m) + " outside [0, 127]");
    NoteName n;
    n.pname = kChromatic[m % 12].pname;
    n.accidental = kChromatic[m % 12].accidental;
    n.octave = m / 12 - 1;
    return n;
}

int midi_from_note_name(const NoteName& n) {
    if (n.octave < -1 || n.octave > 9)
        throw std::domain_error("octave " + std::to_string(n.octave) + " outside [-1, 9]");
    int semis = letter_semitone(n.pname);
    if (n.accidental == Accidental::Sharp)
        semis += 1;
    else if (n.accidental == Accidental::Flat)
        semis -= 1;
    int midi = 12 * (n.octave + 1) + semis;
    if (midi < 0 || midi > 127)
        throw std::domain_error("note " + to_string(n) + " maps outside MIDI [0, 127]");
    return midi;
}

double cents_between(double f1, double f2) {
    if (!(f1 > 0.0) || !(f2 > 0.0))
        throw std::domain_error("frequencies must be positive");
    return 1200.0 * std::log2(f2 / f1);
}

std::string to_string(const NoteName& n) {
    std::string s(1, static_cast<char>(n.pname - 'a' + 'A'));
    if (n.accidental == Accidental::Sharp)
        s += '#';
    else if (n.accidental == Accidental::Flat)
        s += 'b';
    s += std::to_string(n.octave);
    return s;
}

const char* to_string(Accidental a) {
    switch (a) {
    case Accidental::Sharp: return "sharp";
    case Accidental::Flat: return "flat";
    default: return "natural";
    }
}

void AnalysisConfig::validate() const {
    std::ostringstream bad;
    if (!(sample_rate_hz > 0))
        bad << "sample_rate_hz must be positive";
    else if (window_len < 2)
        bad << "window_len must be >= 2";
    else if (fft_len < window_len)
        bad << "fft_len must be >= window_len";
    else if (!std::has_single_bit(static_cast<unsigned>(fft_len)))
        bad << "fft_len must be a power of two";
    else if (!(hop_s > 0))
        bad << "hop_s must be positive";
    else if (!(f0_search_semitones > 0))
        bad << "f0_search_semitones must be positive";
    else if (!(voicing_threshold >= 0 && voicing_threshold <= 1))
        bad << "voicing_threshold must lie in [0, 1]";
    else if (!(vibrato_min_dur_s >= 0))
        bad << "vibrato_min_dur_s must be nonnegative";
    else if (!(vibrato_band_lo_hz > 0 && vibrato_band_lo_hz < vibrato_band_hi_hz &&
               vibrato_band_hi_hz < 1.0 / (2.0 * hop_s)))
        bad << "vibrato band must satisfy 0 < low < high < 1/(2*hop_s)";
    else if (!(silence_floor_db < 0))
        bad << "silence_floor_db must be negative";
    else
        return;
    throw UsageError("invalid analysis config: " + bad.str());
}

} // namespace meiperf
