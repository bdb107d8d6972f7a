#include "meiperf/payload.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <span>

#include "json.hpp"
#include "meiperf/errors.hpp"

namespace meiperf {

namespace {

using nlohmann::json;

void append_json_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

void append_optional(std::string& out, const std::optional<double>& v) {
    if (v)
        out += format_number(*v);
    else
        out += "null";
}

void append_track(std::string& out, const char* key,
                  const std::vector<std::optional<double>>& track, bool last) {
    out += '"';
    out += key;
    out += "\":[";
    for (size_t i = 0; i < track.size(); ++i) {
        if (i)
            out += ',';
        append_optional(out, track[i]);
    }
    out += last ? "]" : "],";
}

const char* const kContinuousKeys[6] = {"f0_hz",         "power_db",       "spectral_centroid_hz",
                                        "spectral_flux", "spectral_slope", "spectral_flatness"};

const char* const kSummaryKeys[10] = {
    "perceived_pitch_hz",       "jitter",
    "vibrato_rate_hz",          "vibrato_depth_cents",
    "mean_power_db",            "shimmer",
    "mean_spectral_centroid_hz", "mean_spectral_flux",
    "mean_spectral_slope",      "mean_spectral_flatness"};

std::vector<std::optional<double>>& track_by_index(ExtDataPayload& p, size_t i) {
    std::vector<std::optional<double>>* tracks[6] = {
        &p.f0_hz,         &p.power_db,       &p.spectral_centroid_hz,
        &p.spectral_flux, &p.spectral_slope, &p.spectral_flatness};
    return *tracks[i];
}

const std::vector<std::optional<double>>& track_by_index(const ExtDataPayload& p, size_t i) {
    return track_by_index(const_cast<ExtDataPayload&>(p), i);
}

std::optional<double>& summary_by_index(ExtDataPayload& p, size_t i) {
    std::optional<double>* fields[10] = {
        &p.perceived_pitch_hz,       &p.jitter,
        &p.vibrato_rate_hz,          &p.vibrato_depth_cents,
        &p.mean_power_db,            &p.shimmer,
        &p.mean_spectral_centroid_hz, &p.mean_spectral_flux,
        &p.mean_spectral_slope,      &p.mean_spectral_flatness};
    return *fields[i];
}

const std::optional<double>& summary_by_index(const ExtDataPayload& p, size_t i) {
    return summary_by_index(const_cast<ExtDataPayload&>(p), i);
}

double require_number(const json& j, const std::string& where) {
    if (!j.is_number())
        throw ValidationError(where + " must be a number");
    return j.get<double>();
}

std::optional<double> number_or_null(const json& j, const std::string& where) {
    if (j.is_null())
        return std::nullopt;
    return require_number(j, where);
}

void check_keys(const json& obj, const std::string& where,
                std::span<const char* const> known, ParseMode mode, ExtDataPayload& p) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) {
                found = true;
                break;
            }
        if (found)
            continue;
        const std::string path = where.empty() ? it.key() : where + "." + it.key();
        if (mode == ParseMode::Strict)
            throw ValidationError("unknown key '" + path + "'");
        p.extras[path] = it.value().dump();
    }
    for (const char* k : known)
        if (!obj.contains(k))
            throw ValidationError("missing key '" + (where.empty() ? k : where + "." + k) + "'");
}

} // namespace

std::string format_number(double x) {
    if (!std::isfinite(x))
        throw UsageError("cannot encode non-finite number");
    if (x == 0.0)
        return "0";

    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8e", std::abs(x)); // d.dddddddde±XX
    std::string digits;
    digits += buf[0];
    digits.append(buf + 2, 8);
    const int exp10 = std::atoi(std::strchr(buf, 'e') + 1);
    while (digits.size() > 1 && digits.back() == '0')
        digits.pop_back();

    std::string out;
    if (x < 0)
        out += '-';
    if (exp10 >= -3 && exp10 <= 8) {
        if (exp10 >= 0) {
            const size_t int_digits = static_cast<size_t>(exp10) + 1;
            if (digits.size() <= int_digits) {
                out += digits;
                out.append(int_digits - digits.size(), '0');
            } else {
                out += digits.substr(0, int_digits);
                out += '.';
                out += digits.substr(int_digits);
            }
        } else {
            out += "0.";
            out.append(static_cast<size_t>(-exp10) - 1, '0');
            out += digits;
        }
    } else {
        out += digits[0];
        if (digits.size() > 1) {
            out += '.';
            out += digits.substr(1);
        }
        out += 'e';
        out += std::to_string(exp10);
    }
    return out;
}

std::string json_encode_payload(const ExtDataPayload& p) {
    std::string out;
    out.reserve(256 + 80 * static_cast<size_t>(p.frame_count));
    out += "{\"schema\":";
    append_json_string(out, p.schema);
    out += ",\"onset_s\":";
    out += format_number(p.onset_s);
    out += ",\"duration_s\":";
    out += format_number(p.duration_s);
    out += ",\"frame\":{\"hop_s\":";
    out += format_number(p.frame_hop_s);
    out += ",\"count\":";
    out += std::to_string(p.frame_count);
    out += "},\"continuous\":{";
    for (size_t i = 0; i < 6; ++i)
        append_track(out, kContinuousKeys[i], track_by_index(p, i), i == 5);
    out += "},\"summary\":{";
    for (size_t i = 0; i < 10; ++i) {
        if (i)
            out += ',';
        out += '"';
        out += kSummaryKeys[i];
        out += "\":";
        append_optional(out, summary_by_index(p, i));
    }
    out += "}}";
    return out;
}

ExtDataPayload json_decode_payload(const std::string& text, ParseMode mode) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON payload: ") + e.what());
    }
    if (!j.is_object())
        throw ValidationError("payload must be a JSON object");

    ExtDataPayload p;
    static const char* const kTopKeys[6] = {"schema", "onset_s", "duration_s",
                                            "frame",  "continuous", "summary"};
    check_keys(j, "", kTopKeys, mode, p);

    if (!j["schema"].is_string())
        throw ValidationError("schema must be a string");
    p.schema = j["schema"].get<std::string>();
    if (mode == ParseMode::Strict && p.schema != kPayloadSchema)
        throw ValidationError("unsupported payload schema '" + p.schema + "'");

    p.onset_s = require_number(j["onset_s"], "onset_s");
    p.duration_s = require_number(j["duration_s"], "duration_s");

    const json& frame = j["frame"];
    if (!frame.is_object())
        throw ValidationError("frame must be an object");
    static const char* const kFrameKeys[2] = {"hop_s", "count"};
    check_keys(frame, "frame", kFrameKeys, mode, p);
    p.frame_hop_s = require_number(frame["hop_s"], "frame.hop_s");
    const json& count = frame["count"];
    if (count.is_number_integer() || count.is_number_unsigned()) {
        p.frame_count = count.get<long long>();
    } else if (mode == ParseMode::Lenient && count.is_number() &&
               count.get<double>() == std::floor(count.get<double>())) {
        p.frame_count = static_cast<long long>(count.get<double>());
    } else {
        throw ValidationError("frame.count must be an integer");
    }
    if (p.frame_count < 0)
        throw ValidationError("frame.count must be nonnegative");

    const json& cont = j["continuous"];
    if (!cont.is_object())
        throw ValidationError("continuous must be an object");
    check_keys(cont, "continuous", kContinuousKeys, mode, p);
    for (size_t i = 0; i < 6; ++i) {
        const std::string where = std::string("continuous.") + kContinuousKeys[i];
        const json& arr = cont[kContinuousKeys[i]];
        if (!arr.is_array())
            throw ValidationError(where + " must be an array");
        if (static_cast<long long>(arr.size()) != p.frame_count)
            throw ValidationError(where + " has length " + std::to_string(arr.size()) +
                                  " but frame.count is " + std::to_string(p.frame_count));
        auto& track = track_by_index(p, i);
        track.reserve(arr.size());
        for (size_t k = 0; k < arr.size(); ++k)
            track.push_back(number_or_null(arr[k], where + "[" + std::to_string(k) + "]"));
    }

    const json& summ = j["summary"];
    if (!summ.is_object())
        throw ValidationError("summary must be an object");
    check_keys(summ, "summary", kSummaryKeys, mode, p);
    for (size_t i = 0; i < 10; ++i)
        summary_by_index(p, i) =
            number_or_null(summ[kSummaryKeys[i]], std::string("summary.") + kSummaryKeys[i]);

    return p;
}

} // namespace meiperf
