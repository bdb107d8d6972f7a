#include "meiperf/summary.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace meiperf {

namespace {

double cents_rel_a440(double hz) {
    return 1200.0 * std::log2(hz / 440.0);
}

std::optional<double> mean_of_defined(const std::vector<std::optional<double>>& track) {
    double sum = 0.0;
    size_t n = 0;
    for (const auto& v : track)
        if (v) {
            sum += *v;
            ++n;
        }
    if (n == 0)
        return std::nullopt;
    return sum / static_cast<double>(n);
}

} // namespace

std::optional<double> perceived_pitch(std::span<const std::optional<double>> f0_track) {
    double cents_sum = 0.0;
    size_t n = 0;
    for (const auto& f : f0_track)
        if (f) {
            cents_sum += cents_rel_a440(*f);
            ++n;
        }
    if (n < 2)
        return std::nullopt;
    return 440.0 * std::pow(2.0, cents_sum / static_cast<double>(n) / 1200.0);
}

std::optional<double> jitter(std::span<const std::optional<double>> f0_track) {
    double diff_sum = 0.0;
    size_t pairs = 0;
    double voiced_sum = 0.0;
    size_t voiced = 0;
    for (size_t i = 0; i < f0_track.size(); ++i) {
        if (f0_track[i]) {
            voiced_sum += *f0_track[i];
            ++voiced;
        }
        if (i + 1 < f0_track.size() && f0_track[i] && f0_track[i + 1]) {
            diff_sum += std::abs(*f0_track[i + 1] - *f0_track[i]);
            ++pairs;
        }
    }
    if (pairs == 0 || voiced_sum <= 0.0)
        return std::nullopt;
    return (diff_sum / static_cast<double>(pairs)) / (voiced_sum / static_cast<double>(voiced));
}

std::optional<double> shimmer(std::span<const double> power_track_db, double silence_floor_db) {
    double diff_sum = 0.0;
    size_t pairs = 0;
    double amp_sum = 0.0;
    size_t qualifying = 0;
    auto amp = [](double db) { return std::pow(10.0, db / 20.0); };
    for (size_t i = 0; i < power_track_db.size(); ++i) {
        const bool cur_ok = power_track_db[i] > silence_floor_db;
        if (cur_ok) {
            amp_sum += amp(power_track_db[i]);
            ++qualifying;
        }
        if (i + 1 < power_track_db.size() && cur_ok && power_track_db[i + 1] > silence_floor_db) {
            diff_sum += std::abs(amp(power_track_db[i + 1]) - amp(power_track_db[i]));
            ++pairs;
        }
    }
    if (pairs == 0 || amp_sum <= 0.0)
        return std::nullopt;
    return (diff_sum / static_cast<double>(pairs)) / (amp_sum / static_cast<double>(qualifying));
}

std::optional<VibratoEstimate> vibrato(std::span<const std::optional<double>> f0_track,
                                       const FrameGrid& grid, const AnalysisConfig& cfg) {
    // locate the voiced span
    std::ptrdiff_t first = -1, last = -1;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(f0_track.size()); ++i)
        if (f0_track[static_cast<size_t>(i)]) {
            if (first < 0)
                first = i;
            last = i;
        }
    if (first < 0 || last == first)
        return std::nullopt;

    const double hop = grid.hop_s;
    const double span_s = static_cast<double>(last - first + 1) * hop;
    if (span_s + 1e-9 < cfg.vibrato_min_dur_s)
        return std::nullopt;

    // gap check, then linear interpolation of interior unvoiced frames
    std::ptrdiff_t prev_voiced = first;
    for (std::ptrdiff_t i = first + 1; i <= last; ++i) {
        if (!f0_track[static_cast<size_t>(i)])
            continue;
        if (i - prev_voiced - 1 > kVibratoMaxGapFrames)
            return std::nullopt;
        prev_voiced = i;
    }

    const size_t n = static_cast<size_t>(last - first + 1);
    std::vector<double> cents(n);
    prev_voiced = first;
    for (std::ptrdiff_t i = first; i <= last; ++i) {
        const size_t k = static_cast<size_t>(i - first);
        if (f0_track[static_cast<size_t>(i)]) {
            cents[k] = cents_rel_a440(*f0_track[static_cast<size_t>(i)]);
            prev_voiced = i;
        } else {
            std::ptrdiff_t next_voiced = i + 1;
            while (!f0_track[static_cast<size_t>(next_voiced)])
                ++next_voiced;
            const double a = cents_rel_a440(*f0_track[static_cast<size_t>(prev_voiced)]);
            const double b = cents_rel_a440(*f0_track[static_cast<size_t>(next_voiced)]);
            const double t = static_cast<double>(i - prev_voiced) /
                             static_cast<double>(next_voiced - prev_voiced);
            cents[k] = a + t * (b - a);
        }
    }

    double mean = 0.0;
    for (double c : cents)
        mean += c;
    mean /= static_cast<double>(n);
    for (double& c : cents)
        c -= mean;

    // direct DFT magnitude at integer bins; evaluated lazily around the band
    auto dft_mag = [&](long long k) {
        std::complex<double> acc(0.0, 0.0);
        const double w = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        for (size_t i = 0; i < n; ++i)
            acc += cents[i] * std::complex<double>(std::cos(w * static_cast<double>(i)),
                                                   std::sin(w * static_cast<double>(i)));
        return std::abs(acc);
    };

    const double bin_hz = 1.0 / (static_cast<double>(n) * hop);
    long long best_k = -1;
    double best_mag = -1.0;
    for (long long k = 1; k <= static_cast<long long>(n) / 2; ++k) {
        const double f = static_cast<double>(k) * bin_hz;
        if (f < cfg.vibrato_band_lo_hz - 1e-9 || f > cfg.vibrato_band_hi_hz + 1e-9)
            continue;
        const double m = dft_mag(k);
        if (m > best_mag) {
            best_mag = m;
            best_k = k;
        }
    }
    if (best_k < 0)
        return std::nullopt;

    // parabolic refinement of peak position and magnitude
    double delta = 0.0;
    double peak_mag = best_mag;
    if (best_k - 1 >= 1 && best_k + 1 <= static_cast<long long>(n) - 1) {
        const double ym = dft_mag(best_k - 1);
        const double y0 = best_mag;
        const double yp = dft_mag(best_k + 1);
        const double denom = ym - 2.0 * y0 + yp;
        if (denom < 0.0) {
            delta = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
            peak_mag = y0 - 0.25 * (ym - yp) * delta;
        }
    }

    const double depth = 2.0 * peak_mag / static_cast<double>(n);
    if (depth < kVibratoDepthGateCents)
        return std::nullopt;

    VibratoEstimate est;
    est.rate_hz = std::clamp((static_cast<double>(best_k) + delta) * bin_hz,
                             cfg.vibrato_band_lo_hz, cfg.vibrato_band_hi_hz);
    est.depth_cents = depth;
    return est;
}

NoteSummary summarize_note(const DescriptorFrameSeries& series, const AnalysisConfig& cfg) {
    NoteSummary s;
    s.perceived_pitch_hz = perceived_pitch(series.f0_hz);
    s.jitter = jitter(series.f0_hz);
    if (auto v = vibrato(series.f0_hz, series.grid, cfg)) {
        s.vibrato_rate_hz = v->rate_hz;
        s.vibrato_depth_cents = v->depth_cents;
    }

    double linear_power = 0.0;
    for (double db : series.power_db)
        linear_power += std::pow(10.0, db / 10.0);
    linear_power /= std::max<size_t>(series.power_db.size(), 1);
    s.mean_power_db = std::max(10.0 * std::log10(linear_power), cfg.silence_floor_db);

    s.shimmer = shimmer(series.power_db, cfg.silence_floor_db);
    s.mean_spectral_centroid_hz = mean_of_defined(series.spectral_centroid_hz);
    s.mean_spectral_flux = mean_of_defined(series.spectral_flux);
    s.mean_spectral_slope = mean_of_defined(series.spectral_slope);
    s.mean_spectral_flatness = mean_of_defined(series.spectral_flatness);
    return s;
}

} // namespace meiperf
