// meiperf: extract note-level performance descriptors from audio guided by
// a note transcription and carry them inside MEI <extData> payloads.

#include <iostream>

#include "CLI11.hpp"
#include "meiperf/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Note-level performance data in MEI <extData>"};
    app.require_subcommand(1);

    meiperf::cli::EncodeOptions enc;
    CLI::App* encode = app.add_subcommand(
        "encode", "Analyze a WAV guided by a Tony note CSV and write an MEI file");
    encode->add_option("--audio", enc.audio_path, "Input WAV (PCM16 or float32)")->required();
    encode->add_option("--notes", enc.notes_path, "Tony CSV: onset_s,frequency_hz,duration_s")
        ->required();
    encode->add_option("--out", enc.out_path, "Output MEI path")->required();
    encode->add_option("--audio-target", enc.audio_target,
                       "URI recorded in avFile/@target (defaults to --audio)");
    encode->add_option("--hop-ms", enc.hop_ms, "Analysis hop in milliseconds (default 10)");
    encode->add_option("--window", enc.window, "Analysis window length in samples (default 2048)");
    encode->add_option("--id-prefix", enc.id_prefix, "Note id prefix (default note-)");

    meiperf::cli::DecodeOptions dec;
    CLI::App* decode =
        app.add_subcommand("decode", "Extract summary.csv (and payload JSON) from an MEI file");
    decode->add_option("--mei", dec.mei_path, "Input MEI path")->required();
    decode->add_option("--out-dir", dec.out_dir, "Output directory")->required();
    decode->add_option("--format", dec.format, "csv or json (json adds one <id>.json per note)")
        ->check(CLI::IsMember({"csv", "json"}));

    meiperf::cli::ValidateOptions val;
    CLI::App* validate = app.add_subcommand("validate", "Check an MEI file and report violations");
    validate->add_option("--mei", val.mei_path, "Input MEI path")->required();
    validate->add_flag("--lenient", val.lenient, "Downgrade linkage problems to warnings");

    meiperf::cli::DescribeOptions desc;
    CLI::App* describe = app.add_subcommand(
        "describe", "Write the payload JSON array for a WAV + notes CSV, no MEI wrapper");
    describe->add_option("--audio", desc.audio_path, "Input WAV")->required();
    describe->add_option("--notes", desc.notes_path, "Tony CSV")->required();
    describe->add_option("--out", desc.out_path, "Output JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // help is success, anything else is usage
    }

    if (encode->parsed())
        return meiperf::cli::cmd_encode(enc, std::cout, std::cerr);
    if (decode->parsed())
        return meiperf::cli::cmd_decode(dec, std::cout, std::cerr);
    if (validate->parsed())
        return meiperf::cli::cmd_validate(val, std::cout, std::cerr);
    if (describe->parsed())
        return meiperf::cli::cmd_describe(desc, std::cout, std::cerr);
    return 1;
}
