#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meiperf/audio.hpp"
#include "meiperf/note.hpp"

namespace meiperf {

/// Frame centers covering one note's region of importance.
struct FrameGrid {
    std::string note_id;
    std::vector<double> frame_times_s; // strictly increasing, spaced by hop_s
    double hop_s = 0.0;

    std::size_t count() const { return frame_times_s.size(); }
};

/// The six frame-wise continuous descriptors for one note. All tracks have
/// grid.count() entries. Spectral descriptors are null on all-zero frames;
/// f0 is null on unvoiced frames; power is clamped at the silence floor.
struct DescriptorFrameSeries {
    FrameGrid grid;
    std::vector<std::optional<double>> f0_hz;
    std::vector<double> power_db;
    std::vector<std::optional<double>> spectral_centroid_hz;
    std::vector<std::optional<double>> spectral_flux;
    std::vector<std::optional<double>> spectral_slope;
    std::vector<std::optional<double>> spectral_flatness;
};

/// Lay a frame grid over a note: centers at onset + (k+1/2)*hop for every
/// center inside [onset, onset+duration). A note shorter than one hop gets
/// a single frame at the region midpoint. Throws ValidationError when the
/// note region lies outside the audio or the sample rates disagree.
FrameGrid frame_note(const AudioBuffer& audio, const TranscribedNote& note,
                     const AnalysisConfig& cfg);

/// Magnitude spectrum (fft_len/2 + 1 bins) of the Hann-windowed frame of
/// window_len samples centered at center_s. Samples beyond the signal
/// edges read as zero.
std::vector<double> frame_spectrum(const AudioBuffer& audio, double center_s,
                                   const AnalysisConfig& cfg);

/// Center frequency of every rfft bin, in Hz.
std::vector<double> bin_frequencies(const AnalysisConfig& cfg);

/// Frame power in dB: mean squared sample of the Hann-weighted frame,
/// compensated for the window power gain, clamped at cfg.silence_floor_db.
/// A full-scale sine reads about -3.01 dB.
double frame_power_db(const AudioBuffer& audio, double center_s, const AnalysisConfig& cfg);

/// Band-limited f0 track: per frame, normalized autocorrelation searched
/// over lags inside nominal*2^(±f0_search_semitones/12), parabolic peak
/// interpolation, null when the peak correlation falls below
/// cfg.voicing_threshold.
std::vector<std::optional<double>> track_f0(const AudioBuffer& audio, const TranscribedNote& note,
                                            const FrameGrid& grid, const AnalysisConfig& cfg);

/// Magnitude-weighted mean frequency; null for an all-zero spectrum.
std::optional<double> spectral_centroid(std::span<const double> spectrum,
                                        std::span<const double> bin_freqs);

/// L2 distance between L1-normalized magnitude spectra, in [0, sqrt(2)].
/// An empty `prev` marks the first frame of a note and yields 0.
double spectral_flux(std::span<const double> spectrum, std::span<const double> prev);

/// Least-squares slope of the L1-normalized magnitudes against bin
/// frequency in Hz; null for an all-zero spectrum.
std::optional<double> spectral_slope(std::span<const double> spectrum,
                                     std::span<const double> bin_freqs);

/// Geometric over arithmetic mean of the power spectrum, in [0, 1]. Zero
/// bins enter the geometric mean through a floor of 1e-12 times the max
/// bin. Null for an all-zero spectrum.
std::optional<double> spectral_flatness(std::span<const double> power_spectrum);

/// Run the full continuous-descriptor pipeline over one note.
DescriptorFrameSeries analyze_note(const AudioBuffer& audio, const TranscribedNote& note,
                                   const AnalysisConfig& cfg);

} // namespace meiperf
