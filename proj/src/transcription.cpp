#include "meiperf/transcription.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "meiperf/errors.hpp"

namespace meiperf {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

std::optional<double> parse_field(const std::string& field) {
    if (field.empty())
        return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

} // namespace

TranscriptionFile parse_tony_csv(const std::string& text) {
    std::string_view body = text;
    if (body.starts_with("\xEF\xBB\xBF")) // tolerate a UTF-8 BOM
        body.remove_prefix(3);

    struct Row {
        TranscribedNote note;
        int line;
    };
    std::vector<Row> rows;

    int line_no = 0;
    bool first_content_line = true;
    size_t pos = 0;
    while (pos <= body.size()) {
        size_t nl = body.find('\n', pos);
        std::string_view raw =
            body.substr(pos, nl == std::string_view::npos ? body.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? body.size() + 1 : nl + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r')
            raw = raw.substr(0, raw.size() - 1);
        if (trim(raw).empty())
            continue;

        auto fields = split_fields(raw);
        if (first_content_line) {
            first_content_line = false;
            // Header lines start with a non-numeric field.
            if (!parse_field(fields.empty() ? std::string() : fields[0]))
                continue;
        }
        if (fields.size() != 3)
            throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields "
                             "(onset_s,frequency_hz,duration_s), got " +
                             std::to_string(fields.size()));
        auto onset = parse_field(fields[0]);
        auto freq = parse_field(fields[1]);
        auto dur = parse_field(fields[2]);
        if (!onset || !freq || !dur)
            throw ParseError("line " + std::to_string(line_no) + ": non-numeric field in '" +
                             std::string(raw) + "'");
        if (*onset < 0)
            throw ValidationError("line " + std::to_string(line_no) + ": negative onset " +
                                  fields[0]);
        if (!(*dur > 0))
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": duration must be positive, got " + fields[2]);
        if (!(*freq > 0))
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": frequency must be positive, got " + fields[1]);
        rows.push_back({TranscribedNote{"", *onset, *dur, *freq}, line_no});
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.note.onset_s < b.note.onset_s; });

    for (size_t i = 1; i < rows.size(); ++i) {
        const Row& prev = rows[i - 1];
        const Row& cur = rows[i];
        double overlap = prev.note.onset_s + prev.note.duration_s - cur.note.onset_s;
        if (overlap > kOverlapToleranceS + 1e-12) {
            std::ostringstream msg;
            msg << "notes on line " << prev.line << " and line " << cur.line << " overlap by "
                << overlap * 1000.0 << " ms (tolerance " << kOverlapToleranceS * 1000.0 << " ms)";
            throw ValidationError(msg.str());
        }
    }

    TranscriptionFile out;
    out.notes.reserve(rows.size());
    for (auto& r : rows)
        out.notes.push_back(std::move(r.note));
    return out;
}

TranscriptionFile assign_ids(TranscriptionFile t, const std::string& prefix) {
    // generated ids must stay XML-id-safe: [A-Za-z_][A-Za-z0-9_.-]*
    auto id_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    };
    if (prefix.empty() ||
        !(std::isalpha(static_cast<unsigned char>(prefix[0])) || prefix[0] == '_') ||
        !std::all_of(prefix.begin() + 1, prefix.end(), id_char))
        throw UsageError("id prefix '" + prefix + "' is not XML-id-safe");

    char buf[16];
    for (size_t i = 0; i < t.notes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%04zu", i + 1);
        t.notes[i].id = prefix + buf;
    }
    return t;
}

} // namespace meiperf
