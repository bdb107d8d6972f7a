#pragma once

#include <string>
#include <vector>

#include "meiperf/note.hpp"

namespace meiperf {

/// An ordered, strictly monophonic note list parsed from a Tony-style
/// CSV export. Acts as the proxy score for the analysis pipeline.
struct TranscriptionFile {
    std::vector<TranscribedNote> notes; // sorted by onset
    std::string source_path;
};

/// Parse Tony note rows: `onset_s,frequency_hz,duration_s`, one per line,
/// optional single header line (detected by a non-numeric first field),
/// `\n` or `\r\n` endings.
///
/// Throws ParseError for malformed rows (wrong column count, non-numeric
/// field) and ValidationError for invalid values (negative onset,
/// non-positive duration or frequency) or monophony violations beyond the
/// 10 ms overlap tolerance. All messages carry 1-based line numbers.
TranscriptionFile parse_tony_csv(const std::string& text);

/// Overlap beyond this is a monophony violation; hand-corrected exports
/// routinely contain sub-frame overlaps below it.
inline constexpr double kOverlapToleranceS = 0.010;

/// Assign `<prefix><NNNN>` ids (zero-padded, starting at 0001) in onset
/// order. Deterministic; existing ids are overwritten.
TranscriptionFile assign_ids(TranscriptionFile t, const std::string& prefix = "note-");

} // namespace meiperf
