#pragma once

#include <optional>
#include <span>

#include "meiperf/dsp.hpp"

namespace meiperf {

/// The ten per-note summary descriptors. Pitch-derived fields are all null
/// when fewer than two frames are voiced; spectral means are null when no
/// frame defines the underlying descriptor.
struct NoteSummary {
    std::optional<double> perceived_pitch_hz;
    std::optional<double> jitter;
    std::optional<double> vibrato_rate_hz;
    std::optional<double> vibrato_depth_cents;
    double mean_power_db = 0.0;
    std::optional<double> shimmer;
    std::optional<double> mean_spectral_centroid_hz;
    std::optional<double> mean_spectral_flux;
    std::optional<double> mean_spectral_slope;
    std::optional<double> mean_spectral_flatness;
};

/// Mean of the voiced f0 values in the cents domain (equivalently their
/// geometric mean in Hz); null with fewer than two voiced frames.
std::optional<double> perceived_pitch(std::span<const std::optional<double>> f0_track);

/// Mean absolute frame-to-frame f0 difference over consecutive voiced
/// pairs, divided by the mean voiced f0; null without a voiced pair.
std::optional<double> jitter(std::span<const std::optional<double>> f0_track);

/// Frame-wise shimmer on linear amplitude: mean absolute difference of
/// consecutive above-floor amplitudes divided by their mean; null without
/// a qualifying pair.
std::optional<double> shimmer(std::span<const double> power_track_db,
                              double silence_floor_db = -120.0);

struct VibratoEstimate {
    double rate_hz = 0.0;
    double depth_cents = 0.0;
};

/// Reported vibrato must reach at least this sinusoidal depth.
inline constexpr double kVibratoDepthGateCents = 10.0;

/// Unvoiced gaps longer than this many frames disqualify a note from
/// vibrato estimation; shorter gaps are linearly interpolated.
inline constexpr int kVibratoMaxGapFrames = 3;

/// DFT-peak vibrato estimate over the detrended cents trace of the voiced
/// span. Null when the span is shorter than cfg.vibrato_min_dur_s, a gap
/// exceeds kVibratoMaxGapFrames, no DFT bin falls in the vibrato band, or
/// the peak depth stays under kVibratoDepthGateCents.
std::optional<VibratoEstimate> vibrato(std::span<const std::optional<double>> f0_track,
                                       const FrameGrid& grid, const AnalysisConfig& cfg);

/// Reduce one note's continuous tracks to the ten summary descriptors.
/// Spectral means average the non-null frames; mean_power_db averages in
/// the linear power domain.
NoteSummary summarize_note(const DescriptorFrameSeries& series, const AnalysisConfig& cfg);

} // namespace meiperf
