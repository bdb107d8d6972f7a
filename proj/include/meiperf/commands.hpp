#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace meiperf::cli {

// Exit codes: 0 success, 1 I/O or usage error, 2 validation/parse failure.

struct EncodeOptions {
    std::string audio_path;
    std::string notes_path;
    std::string out_path;
    std::optional<std::string> audio_target; // avFile target; defaults to audio_path
    std::optional<double> hop_ms;
    std::optional<int> window;
    std::string id_prefix = "note-";
};

/// Analyze audio guided by a Tony CSV and write one MEI file. Prints one
/// line per note (id, note name, onset, perceived pitch) to `out`.
int cmd_encode(const EncodeOptions& opt, std::ostream& out, std::ostream& err);

struct DecodeOptions {
    std::string mei_path;
    std::string out_dir;
    std::string format = "csv"; // "csv" | "json"
};

/// Strict-parse an MEI file and write summary.csv (and per-note payload
/// JSON files for --format json) into out_dir.
int cmd_decode(const DecodeOptions& opt, std::ostream& out, std::ostream& err);

struct ValidateOptions {
    std::string mei_path;
    bool lenient = false;
};

/// Print a violation report to `out`; exit 0 iff the report is empty.
int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err);

struct DescribeOptions {
    std::string audio_path;
    std::string notes_path;
    std::string out_path;
};

/// Run the analysis pipeline and write a JSON array of payload objects.
int cmd_describe(const DescribeOptions& opt, std::ostream& out, std::ostream& err);

} // namespace meiperf::cli
