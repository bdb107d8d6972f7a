// Shared randomized-document generators for codec tests. Values are
// snapped to the canonical nine-significant-digit grammar so that decode
// recovers them exactly.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <random>

#include "meiperf/mei.hpp"
#include "meiperf/payload.hpp"

namespace testgen {

inline double snap(double x) {
    return std::strtod(meiperf::format_number(x).c_str(), nullptr);
}

inline meiperf::MeiDocument random_document(std::mt19937& rng, int max_notes = 50) {
    using meiperf::ExtDataPayload;
    using meiperf::MeiDocument;

    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto maybe = [&](double v) -> std::optional<double> {
        return uni(rng) < 0.2 ? std::nullopt : std::optional<double>(snap(v));
    };

    MeiDocument doc;
    doc.av_target = uni(rng) < 0.5 ? "stems/vocal&lead <1>.wav" : "take.wav";
    const int n = static_cast<int>(rng() % static_cast<unsigned>(max_notes + 1));
    double cursor = 0.0;
    for (int i = 0; i < n; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "note-%04d", i + 1);
        const int midi = 36 + static_cast<int>(rng() % 48);
        doc.notes.push_back({id, meiperf::note_name_from_midi(midi)});

        cursor += uni(rng) * 2.0;
        ExtDataPayload p;
        p.onset_s = snap(cursor);
        p.duration_s = snap(0.05 + uni(rng));
        p.frame_hop_s = 0.01;
        p.frame_count = static_cast<long long>(rng() % 20);
        for (long long k = 0; k < p.frame_count; ++k) {
            p.f0_hz.push_back(maybe(80.0 + uni(rng) * 900.0));
            p.power_db.push_back(maybe(-120.0 + uni(rng) * 119.0));
            p.spectral_centroid_hz.push_back(maybe(uni(rng) * 22050.0));
            p.spectral_flux.push_back(maybe(uni(rng) * 1.41421356));
            p.spectral_slope.push_back(maybe((uni(rng) - 0.5) * 1e-4));
            p.spectral_flatness.push_back(maybe(uni(rng)));
        }
        p.perceived_pitch_hz = maybe(100.0 + uni(rng) * 800.0);
        p.jitter = maybe(uni(rng) * 0.05);
        p.vibrato_rate_hz = maybe(3.0 + uni(rng) * 6.0);
        p.vibrato_depth_cents = maybe(10.0 + uni(rng) * 80.0);
        p.mean_power_db = maybe(-60.0 + uni(rng) * 59.0);
        p.shimmer = maybe(uni(rng) * 0.3);
        p.mean_spectral_centroid_hz = maybe(uni(rng) * 22050.0);
        p.mean_spectral_flux = maybe(uni(rng));
        p.mean_spectral_slope = maybe((uni(rng) - 0.5) * 1e-4);
        p.mean_spectral_flatness = maybe(uni(rng));

        doc.whens.push_back({p.onset_s, id, std::move(p)});
    }
    return doc;
}

} // namespace testgen
