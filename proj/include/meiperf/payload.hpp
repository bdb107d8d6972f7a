#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace meiperf {

enum class ParseMode { Strict, Lenient };

inline constexpr const char* kPayloadSchema = "ampact-extdata/1.0";

/// The JSON object stored inside one <extData> CDATA block: note timing,
/// the frame grid, the six continuous tracks, and the ten summaries.
/// Canonical form is fixed-key-order, whitespace-free, numbers at up to
/// nine significant digits.
struct ExtDataPayload {
    std::string schema = kPayloadSchema;
    double onset_s = 0.0;
    double duration_s = 0.0;
    double frame_hop_s = 0.0;
    long long frame_count = 0;

    // continuous tracks, each frame_count long
    std::vector<std::optional<double>> f0_hz;
    std::vector<std::optional<double>> power_db;
    std::vector<std::optional<double>> spectral_centroid_hz;
    std::vector<std::optional<double>> spectral_flux;
    std::vector<std::optional<double>> spectral_slope;
    std::vector<std::optional<double>> spectral_flatness;

    // summary descriptors
    std::optional<double> perceived_pitch_hz;
    std::optional<double> jitter;
    std::optional<double> vibrato_rate_hz;
    std::optional<double> vibrato_depth_cents;
    std::optional<double> mean_power_db;
    std::optional<double> shimmer;
    std::optional<double> mean_spectral_centroid_hz;
    std::optional<double> mean_spectral_flux;
    std::optional<double> mean_spectral_slope;
    std::optional<double> mean_spectral_flatness;

    /// Unknown keys seen by a lenient decode, dotted path -> compact JSON.
    /// Retained for inspection; canonical encoding never emits them.
    std::map<std::string, std::string> extras;
};

/// Canonical decimal rendering: up to nine significant digits, plain
/// notation for rounded magnitudes in [1e-3, 1e9), exponent form outside,
/// no trailing zeros. Stable under decode-then-encode.
std::string format_number(double x);

/// Render the canonical JSON byte string. The output never contains "]]>"
/// and is byte-stable under json_decode_payload followed by re-encoding.
std::string json_encode_payload(const ExtDataPayload& p);

/// Parse a payload JSON object. Strict mode rejects unknown keys and a
/// wrong schema string; lenient mode retains unknown keys in `extras`.
/// Throws ParseError (bad JSON) or ValidationError (schema shape, array
/// length vs frame count, wrong types).
ExtDataPayload json_decode_payload(const std::string& text, ParseMode mode);

} // namespace meiperf
