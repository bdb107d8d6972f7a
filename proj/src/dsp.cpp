#include "meiperf/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "meiperf/errors.hpp"

namespace meiperf {

namespace {

// Snap a time to a sample index. The 1e-6 nudge keeps indices stable when
// a center lands on an exact half-sample (hop 10 ms at 44.1 kHz puts every
// center at x.5 samples), so equal real-time shifts map to equal index
// shifts regardless of rounding noise.
long long sample_index(double seconds, double sample_rate) {
    return static_cast<long long>(std::floor(seconds * sample_rate + 0.5 + 1e-6));
}

std::vector<double> extract_frame(const AudioBuffer& audio, double center_s, int length) {
    const long long center = sample_index(center_s, audio.sample_rate_hz);
    const long long start = center - length / 2;
    const long long n = static_cast<long long>(audio.samples.size());
    std::vector<double> frame(static_cast<size_t>(length), 0.0);
    for (long long i = 0; i < length; ++i) {
        long long idx = start + i;
        if (idx >= 0 && idx < n)
            frame[static_cast<size_t>(i)] = audio.samples[static_cast<size_t>(idx)];
    }
    return frame;
}

std::vector<double> hann_window(int length) {
    std::vector<double> w(static_cast<size_t>(length));
    for (int i = 0; i < length; ++i)
        w[static_cast<size_t>(i)] =
            0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(length));
    return w;
}

void l1_normalize(std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v)
        sum += x;
    if (sum > 0.0)
        for (double& x : v)
            x /= sum;
    else
        std::fill(v.begin(), v.end(), 0.0); // all-zero spectra stay all-zero
}

} // namespace

FrameGrid frame_note(const AudioBuffer& audio, const TranscribedNote& note,
                     const AnalysisConfig& cfg) {
    cfg.validate();
    if (std::abs(audio.sample_rate_hz - cfg.sample_rate_hz) > 1e-6)
        throw ValidationError("audio sample rate " + std::to_string(audio.sample_rate_hz) +
                              " does not match configured rate " +
                              std::to_string(cfg.sample_rate_hz));
    if (!(note.duration_s > 0))
        throw ValidationError("note '" + note.id + "' has non-positive duration");
    const double audio_dur = audio.duration_s();
    if (note.onset_s < 0 || note.onset_s + note.duration_s > audio_dur + 1e-9)
        throw ValidationError("note '" + note.id + "' region [" + std::to_string(note.onset_s) +
                              ", " + std::to_string(note.onset_s + note.duration_s) +
                              "] lies outside the audio (duration " + std::to_string(audio_dur) +
                              " s)");

    FrameGrid grid;
    grid.note_id = note.id;
    grid.hop_s = cfg.hop_s;
    if (note.duration_s < cfg.hop_s) {
        grid.frame_times_s.push_back(note.onset_s + note.duration_s / 2.0);
        return grid;
    }
    // count = #{ k >= 0 : (k + 1/2) * hop < duration }, robust to rounding
    const long long count = static_cast<long long>(
        std::ceil(note.duration_s / cfg.hop_s - 0.5 - 1e-9));
    grid.frame_times_s.reserve(static_cast<size_t>(count));
    for (long long k = 0; k < count; ++k)
        grid.frame_times_s.push_back(note.onset_s + (static_cast<double>(k) + 0.5) * cfg.hop_s);
    return grid;
}

std::vector<double> frame_spectrum(const AudioBuffer& audio, double center_s,
                                   const AnalysisConfig& cfg) {
    std::vector<double> frame = extract_frame(audio, center_s, cfg.window_len);
    const std::vector<double> w = hann_window(cfg.window_len);
    for (size_t i = 0; i < frame.size(); ++i)
        frame[i] *= w[i];
    return detail::rfft_magnitudes(frame, static_cast<size_t>(cfg.fft_len));
}

std::vector<double> bin_frequencies(const AnalysisConfig& cfg) {
    std::vector<double> f(static_cast<size_t>(cfg.fft_len / 2 + 1));
    for (size_t k = 0; k < f.size(); ++k)
        f[k] = static_cast<double>(k) * cfg.sample_rate_hz / static_cast<double>(cfg.fft_len);
    return f;
}

double frame_power_db(const AudioBuffer& audio, double center_s, const AnalysisConfig& cfg) {
    const std::vector<double> frame = extract_frame(audio, center_s, cfg.window_len);
    const std::vector<double> w = hann_window(cfg.window_len);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < frame.size(); ++i) {
        const double wx = w[i] * frame[i];
        num += wx * wx;
        den += w[i] * w[i];
    }
    if (num <= 0.0 || den <= 0.0)
        return cfg.silence_floor_db;
    const double db = 10.0 * std::log10(num / den);
    return std::max(db, cfg.silence_floor_db);
}

std::vector<std::optional<double>> track_f0(const AudioBuffer& audio, const TranscribedNote& note,
                                            const FrameGrid& grid, const AnalysisConfig& cfg) {
    if (!(note.nominal_f0_hz > 0))
        throw ValidationError("note '" + note.id + "' has non-positive nominal f0");
    const double band = std::pow(2.0, cfg.f0_search_semitones / 12.0);
    const double f_lo = note.nominal_f0_hz / band;
    const double f_hi = note.nominal_f0_hz * band;
    const double rate = audio.sample_rate_hz;
    const int n = cfg.window_len;

    long long lag_min = static_cast<long long>(std::ceil(rate / f_hi - 1e-9));
    long long lag_max = static_cast<long long>(std::floor(rate / f_lo + 1e-9));
    lag_min = std::max<long long>(lag_min, 1);
    lag_max = std::min<long long>(lag_max, n - 2);

    std::vector<std::optional<double>> out(grid.count());
    if (lag_min > lag_max)
        return out; // search band empty at this window size: all unvoiced

    const long long r_lo = std::max<long long>(lag_min - 1, 1);
    const long long r_hi = std::min<long long>(lag_max + 1, n - 1);

    std::vector<double> r(static_cast<size_t>(r_hi - r_lo + 1));
    std::vector<double> prefix_sq(static_cast<size_t>(n + 1));

    for (size_t fi = 0; fi < grid.count(); ++fi) {
        const std::vector<double> x = extract_frame(audio, grid.frame_times_s[fi], n);

        prefix_sq[0] = 0.0;
        for (int i = 0; i < n; ++i)
            prefix_sq[static_cast<size_t>(i) + 1] = prefix_sq[static_cast<size_t>(i)] + x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        const double total_sq = prefix_sq[static_cast<size_t>(n)];

        // normalized cross-correlation over the candidate lag range
        for (long long lag = r_lo; lag <= r_hi; ++lag) {
            double num = 0.0;
            const long long m = n - lag;
            for (long long i = 0; i < m; ++i)
                num += x[static_cast<size_t>(i)] * x[static_cast<size_t>(i + lag)];
            const double e0 = prefix_sq[static_cast<size_t>(m)];
            const double e1 = total_sq - prefix_sq[static_cast<size_t>(lag)];
            r[static_cast<size_t>(lag - r_lo)] =
                (e0 > 0.0 && e1 > 0.0) ? num / std::sqrt(e0 * e1) : 0.0;
        }

        long long best = -1;
        double best_r = -2.0;
        for (long long lag = lag_min; lag <= lag_max; ++lag) {
            const double v = r[static_cast<size_t>(lag - r_lo)];
            if (v > best_r) {
                best_r = v;
                best = lag;
            }
        }
        if (best < 0 || best_r < cfg.voicing_threshold)
            continue; // unvoiced

        double delta = 0.0;
        if (best - 1 >= r_lo && best + 1 <= r_hi) {
            const double rm = r[static_cast<size_t>(best - 1 - r_lo)];
            const double r0 = r[static_cast<size_t>(best - r_lo)];
            const double rp = r[static_cast<size_t>(best + 1 - r_lo)];
            const double denom = rm - 2.0 * r0 + rp;
            if (denom < 0.0)
                delta = std::clamp(0.5 * (rm - rp) / denom, -0.5, 0.5);
        }
        const double f0 = rate / (static_cast<double>(best) + delta);
        out[fi] = std::clamp(f0, f_lo, f_hi);
    }
    return out;
}

std::optional<double> spectral_centroid(std::span<const double> spectrum,
                                        std::span<const double> bin_freqs) {
    if (spectrum.size() != bin_freqs.size())
        throw UsageError("spectrum and bin frequency lengths differ");
    double mass = 0.0, weighted = 0.0;
    for (size_t k = 0; k < spectrum.size(); ++k) {
        mass += spectrum[k];
        weighted += spectrum[k] * bin_freqs[k];
    }
    if (mass <= 0.0)
        return std::nullopt;
    return weighted / mass;
}

double spectral_flux(std::span<const double> spectrum, std::span<const double> prev) {
    if (prev.empty())
        return 0.0; // first frame of a note, by convention
    if (spectrum.size() != prev.size())
        throw UsageError("flux spectra lengths differ");
    std::vector<double> a(spectrum.begin(), spectrum.end());
    std::vector<double> b(prev.begin(), prev.end());
    l1_normalize(a);
    l1_normalize(b);
    double sq = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        sq += d * d;
    }
    return std::min(std::sqrt(sq), std::numbers::sqrt2);
}

std::optional<double> spectral_slope(std::span<const double> spectrum,
                                     std::span<const double> bin_freqs) {
    if (spectrum.size() != bin_freqs.size())
        throw UsageError("spectrum and bin frequency lengths differ");
    if (spectrum.size() < 2)
        throw UsageError("spectral slope needs at least two bins");
    double mass = 0.0;
    for (double m : spectrum)
        mass += m;
    if (mass <= 0.0)
        return std::nullopt;

    const double n = static_cast<double>(spectrum.size());
    double f_mean = 0.0, m_mean = 0.0;
    for (size_t k = 0; k < spectrum.size(); ++k) {
        f_mean += bin_freqs[k];
        m_mean += spectrum[k] / mass;
    }
    f_mean /= n;
    m_mean /= n;
    double cov = 0.0, var = 0.0;
    for (size_t k = 0; k < spectrum.size(); ++k) {
        const double df = bin_freqs[k] - f_mean;
        cov += df * (spectrum[k] / mass - m_mean);
        var += df * df;
    }
    if (var <= 0.0)
        return std::nullopt;
    return cov / var;
}

std::optional<double> spectral_flatness(std::span<const double> power_spectrum) {
    double max_bin = 0.0;
    for (double p : power_spectrum)
        max_bin = std::max(max_bin, p);
    if (max_bin <= 0.0 || power_spectrum.empty())
        return std::nullopt;
    const double eps = 1e-12 * max_bin;
    double log_sum = 0.0, sum = 0.0;
    for (double p : power_spectrum) {
        log_sum += std::log(std::max(p, eps));
        sum += p;
    }
    const double n = static_cast<double>(power_spectrum.size());
    const double gm = std::exp(log_sum / n);
    const double am = sum / n;
    return std::clamp(gm / am, 0.0, 1.0);
}

DescriptorFrameSeries analyze_note(const AudioBuffer& audio, const TranscribedNote& note,
                                   const AnalysisConfig& cfg) {
    DescriptorFrameSeries s;
    s.grid = frame_note(audio, note, cfg);
    s.f0_hz = track_f0(audio, note, s.grid, cfg);

    const std::vector<double> freqs = bin_frequencies(cfg);
    const size_t count = s.grid.count();
    s.power_db.resize(count);
    s.spectral_centroid_hz.resize(count);
    s.spectral_flux.resize(count);
    s.spectral_slope.resize(count);
    s.spectral_flatness.resize(count);

    std::vector<double> prev;
    for (size_t k = 0; k < count; ++k) {
        const double center = s.grid.frame_times_s[k];
        std::vector<double> spec = frame_spectrum(audio, center, cfg);
        s.power_db[k] = frame_power_db(audio, center, cfg);

        double peak = 0.0;
        for (double m : spec)
            peak = std::max(peak, m);
        if (peak <= 0.0) {
            // All-zero frame: every spectral descriptor is undefined.
            prev = std::move(spec);
            continue;
        }

        s.spectral_centroid_hz[k] = spectral_centroid(spec, freqs);
        s.spectral_flux[k] = k == 0 ? 0.0 : spectral_flux(spec, prev);
        s.spectral_slope[k] = spectral_slope(spec, freqs);
        std::vector<double> power(spec.size());
        for (size_t i = 0; i < spec.size(); ++i)
            power[i] = spec[i] * spec[i];
        s.spectral_flatness[k] = spectral_flatness(power);
        prev = std::move(spec);
    }
    return s;
}

} // namespace meiperf
