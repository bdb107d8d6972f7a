#include "meiperf/commands.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "meiperf/audio.hpp"
#include "meiperf/dsp.hpp"
#include "meiperf/errors.hpp"
#include "meiperf/mei.hpp"
#include "meiperf/note.hpp"
#include "meiperf/payload.hpp"
#include "meiperf/summary.hpp"
#include "meiperf/transcription.hpp"

namespace meiperf::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad())
        throw IoError("failed reading '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot write '" + path + "'");
    f << content;
    f.flush();
    if (!f.good())
        throw IoError("failed writing '" + path + "'");
}

std::string fixed3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

AnalysisConfig make_config(const AudioBuffer& audio, const std::optional<double>& hop_ms,
                           const std::optional<int>& window) {
    AnalysisConfig cfg;
    cfg.sample_rate_hz = audio.sample_rate_hz;
    if (hop_ms)
        cfg.hop_s = *hop_ms / 1000.0;
    if (window) {
        cfg.window_len = *window;
        cfg.fft_len = static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(*window, 2))));
    }
    cfg.validate();
    return cfg;
}

struct AnalyzedNotes {
    std::vector<TranscribedNote> notes;
    std::vector<NoteName> names;
    std::vector<std::pair<DescriptorFrameSeries, NoteSummary>> records;
};

AnalyzedNotes run_pipeline(const std::string& audio_path, const std::string& notes_path,
                           const std::optional<double>& hop_ms, const std::optional<int>& window,
                           const std::string& id_prefix) {
    const AudioBuffer audio = load_wav(audio_path);
    const AnalysisConfig cfg = make_config(audio, hop_ms, window);

    TranscriptionFile tf = parse_tony_csv(read_file(notes_path));
    tf.source_path = notes_path;
    tf = assign_ids(tf, id_prefix);

    AnalyzedNotes out;
    out.notes = tf.notes;
    out.names.reserve(tf.notes.size());
    out.records.reserve(tf.notes.size());
    for (const TranscribedNote& note : tf.notes) {
        DescriptorFrameSeries series = analyze_note(audio, note, cfg);
        NoteSummary summary = summarize_note(series, cfg);
        out.names.push_back(note_name_from_midi(
            static_cast<int>(std::llround(midi_from_hz(note.nominal_f0_hz)))));
        out.records.emplace_back(std::move(series), std::move(summary));
    }
    return out;
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int cmd_encode(const EncodeOptions& opt, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&]() -> int {
        AnalyzedNotes analyzed =
            run_pipeline(opt.audio_path, opt.notes_path, opt.hop_ms, opt.window, opt.id_prefix);

        for (size_t i = 0; i < analyzed.notes.size(); ++i) {
            const auto& note = analyzed.notes[i];
            const auto& summary = analyzed.records[i].second;
            out << note.id << ' ' << to_string(analyzed.names[i]) << ' ' << fixed3(note.onset_s)
                << ' '
                << (summary.perceived_pitch_hz ? fixed3(*summary.perceived_pitch_hz)
                                               : std::string("-"))
                << "\n";
        }

        MeiDocument doc =
            build_document(analyzed.notes, analyzed.names, analyzed.records,
                           opt.audio_target.value_or(opt.audio_path));
        write_file(opt.out_path, serialize_mei(doc));
        return 0;
    });
}

int cmd_decode(const DecodeOptions& opt, std::ostream& out, std::ostream& err) {
    (void)out;
    return run_guarded(err, [&]() -> int {
        if (opt.format != "csv" && opt.format != "json")
            throw UsageError("unknown decode format '" + opt.format + "' (expected csv or json)");
        const std::string xml = read_file(opt.mei_path);
        MeiParseResult parsed = parse_mei(xml, ParseMode::Strict);

        std::error_code ec;
        std::filesystem::create_directories(opt.out_dir, ec);
        if (ec)
            throw IoError("cannot create output directory '" + opt.out_dir + "': " + ec.message());

        std::ostringstream csv;
        csv << "id,pname,accidental,octave,onset_s,duration_s,perceived_pitch_hz,jitter,"
               "vibrato_rate_hz,vibrato_depth_cents,mean_power_db,shimmer,"
               "mean_spectral_centroid_hz,mean_spectral_flux,mean_spectral_slope,"
               "mean_spectral_flatness\n";
        auto cell = [](const std::optional<double>& v) {
            return v ? format_number(*v) : std::string();
        };
        for (const MeiWhen& w : parsed.doc.whens) {
            const MeiNote* note = nullptr;
            for (const MeiNote& n : parsed.doc.notes)
                if (n.id == w.target_id) {
                    note = &n;
                    break;
                }
            if (!note)
                throw ValidationError("when references missing xml:id '" + w.target_id + "'");
            const ExtDataPayload& p = w.payload;
            csv << note->id << ',' << note->name.pname << ',' << to_string(note->name.accidental)
                << ',' << note->name.octave << ',' << format_number(p.onset_s) << ','
                << format_number(p.duration_s) << ',' << cell(p.perceived_pitch_hz) << ','
                << cell(p.jitter) << ',' << cell(p.vibrato_rate_hz) << ','
                << cell(p.vibrato_depth_cents) << ',' << cell(p.mean_power_db) << ','
                << cell(p.shimmer) << ',' << cell(p.mean_spectral_centroid_hz) << ','
                << cell(p.mean_spectral_flux) << ',' << cell(p.mean_spectral_slope) << ','
                << cell(p.mean_spectral_flatness) << "\n";

            if (opt.format == "json") {
                const std::filesystem::path file =
                    std::filesystem::path(opt.out_dir) / (w.target_id + ".json");
                write_file(file.string(), json_encode_payload(p));
            }
        }
        const std::filesystem::path summary_path =
            std::filesystem::path(opt.out_dir) / "summary.csv";
        write_file(summary_path.string(), csv.str());
        return 0;
    });
}

int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&]() -> int {
        const std::string xml = read_file(opt.mei_path);
        const ParseMode mode = opt.lenient ? ParseMode::Lenient : ParseMode::Strict;

        MeiParseResult parsed;
        try {
            parsed = parse_mei(xml, mode);
        } catch (const ParseError& e) {
            out << "violation: " << e.what() << "\n";
            return 2;
        } catch (const ValidationError& e) {
            out << "violation: " << e.what() << "\n";
            return 2;
        }
        for (const std::string& w : parsed.warnings)
            out << "warning: " << w << "\n";

        // A lenient parse already reported linkage problems as warnings.
        const std::vector<Violation> violations =
            validate_document(parsed.doc, /*check_links=*/!opt.lenient);
        for (const Violation& v : violations)
            out << "violation: " << v.where << ": " << v.message << "\n";
        return violations.empty() ? 0 : 2;
    });
}

int cmd_describe(const DescribeOptions& opt, std::ostream& out, std::ostream& err) {
    (void)out;
    return run_guarded(err, [&]() -> int {
        AnalyzedNotes analyzed =
            run_pipeline(opt.audio_path, opt.notes_path, std::nullopt, std::nullopt, "note-");
        const MeiDocument doc =
            build_document(analyzed.notes, analyzed.names, analyzed.records, "");
        std::string json = "[";
        for (size_t i = 0; i < doc.whens.size(); ++i) {
            if (i)
                json += ',';
            json += json_encode_payload(doc.whens[i].payload);
        }
        json += "]";
        write_file(opt.out_path, json);
        return 0;
    });
}

} // namespace meiperf::cli
