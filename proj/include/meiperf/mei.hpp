#pragma once

#include <string>
#include <utility>
#include <vector>

#include "meiperf/dsp.hpp"
#include "meiperf/note.hpp"
#include "meiperf/payload.hpp"
#include "meiperf/summary.hpp"

namespace meiperf {

/// One symbolic note on the score side.
struct MeiNote {
    std::string id;
    NoteName name;
};

/// One <when> anchor on the performance side: a time point in the
/// recording, the note it targets, and the extData payload.
struct MeiWhen {
    double absolute_s = 0.0;
    std::string target_id;
    ExtDataPayload payload;
};

/// In-memory model of one encoded document: the score section, the
/// performance/when section, and the analyzed recording's URI.
struct MeiDocument {
    std::vector<MeiNote> notes;
    std::vector<MeiWhen> whens;
    std::string av_target;
};

/// Assemble a document from per-note analysis results. All lists must
/// have equal length and ids must be assigned; throws UsageError.
MeiDocument build_document(const std::vector<TranscribedNote>& notes,
                           const std::vector<NoteName>& names,
                           const std::vector<std::pair<DescriptorFrameSeries, NoteSummary>>& records,
                           std::string av_target);

/// Canonical MEI 5 serialization: performance/recording with one avFile
/// and the when elements (absolute as "HH:MM:SS.mmm", extData payload in
/// a CDATA section), then a one-measure score skeleton whose notes carry
/// xml:id, pname, oct, and accid.ges for non-natural accidentals.
/// Deterministic byte output; serialize(parse(serialize(d))) is a fixpoint.
std::string serialize_mei(const MeiDocument& doc);

struct MeiParseResult {
    MeiDocument doc;
    std::vector<std::string> warnings; // lenient mode only
};

/// Parse an MEI document produced by serialize_mei (or compatible).
/// Strict mode turns dangling links, unknown payload keys, and format
/// deviations into errors; lenient mode records warnings and keeps going.
/// Throws ParseError (malformed XML/JSON/time) or ValidationError
/// (broken links, payload schema violations), with note ids in messages.
MeiParseResult parse_mei(const std::string& xml, ParseMode mode = ParseMode::Strict);

struct Violation {
    std::string where;   // note id or positional label
    std::string message;
};

/// Structural validation: note/when pairing in document order, absolute
/// times nondecreasing, payload array lengths vs frame count, payload
/// onset against when/@absolute (1 ms), flatness ranges, positive
/// durations. Returns violations; never throws. `check_links` can be
/// dropped when linkage problems were already reported by a lenient parse.
std::vector<Violation> validate_document(const MeiDocument& doc, bool check_links = true);

/// "HH:MM:SS.mmm" (milliseconds, hours widen past two digits as needed).
std::string format_absolute(double seconds);

/// Parse "HH:MM:SS.mmm"; lenient mode also accepts plain decimal seconds.
double parse_absolute(const std::string& text, ParseMode mode);

} // namespace meiperf
