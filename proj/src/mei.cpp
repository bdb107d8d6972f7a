#include "meiperf/mei.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "meiperf/errors.hpp"
#include "xml.hpp"

namespace meiperf {

namespace {

constexpr const char* kMeiNs = "http://www.music-encoding.org/ns/mei";

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

const char* accid_ges_code(Accidental a) {
    switch (a) {
    case Accidental::Sharp: return "s";
    case Accidental::Flat: return "f";
    default: return nullptr;
    }
}

std::string cdata_text(const detail::XmlNode& ext_data) {
    std::string cdata;
    std::string plain;
    for (const auto& child : ext_data.children) {
        if (child.kind == detail::XmlNode::Kind::Cdata)
            cdata += child.text;
        else if (child.kind == detail::XmlNode::Kind::Text)
            plain += child.text;
    }
    if (!cdata.empty())
        return cdata;
    // fall back to raw text so hand-written documents still decode
    size_t b = plain.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return std::string();
    size_t e = plain.find_last_not_of(" \t\r\n");
    return plain.substr(b, e - b + 1);
}

int parse_int_attr(const std::string& s, bool* ok) {
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    *ok = end == s.c_str() + s.size() && !s.empty();
    return static_cast<int>(v);
}

} // namespace

std::string format_absolute(double seconds) {
    if (!(seconds >= 0))
        throw UsageError("cannot format negative time");
    long long ms = std::llround(seconds * 1000.0);
    long long h = ms / 3'600'000;
    ms %= 3'600'000;
    long long m = ms / 60'000;
    ms %= 60'000;
    long long s = ms / 1'000;
    ms %= 1'000;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%03lld", h, m, s, ms);
    return buf;
}

double parse_absolute(const std::string& text, ParseMode mode) {
    // HH:MM:SS.mmm (hours may exceed two digits)
    long long h = 0, m = 0, s = 0, ms = 0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%lld:%2lld:%2lld.%3lld%n", &h, &m, &s, &ms, &consumed) == 4 &&
        consumed == static_cast<int>(text.size()) && h >= 0 && m >= 0 && m < 60 && s >= 0 &&
        s < 60 && ms >= 0) {
        // require exactly three millisecond digits
        size_t dot = text.rfind('.');
        if (dot != std::string::npos && text.size() - dot - 1 == 3)
            return static_cast<double>(h) * 3600.0 + static_cast<double>(m) * 60.0 +
                   static_cast<double>(s) + static_cast<double>(ms) / 1000.0;
    }
    if (mode == ParseMode::Lenient) {
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() + text.size() && !text.empty() && v >= 0)
            return v;
    }
    throw ParseError("invalid absolute time '" + text + "' (expected HH:MM:SS.mmm)");
}

MeiDocument build_document(const std::vector<TranscribedNote>& notes,
                           const std::vector<NoteName>& names,
                           const std::vector<std::pair<DescriptorFrameSeries, NoteSummary>>& records,
                           std::string av_target) {
    if (notes.size() != names.size() || notes.size() != records.size())
        throw UsageError("build_document: notes, names, and records must have equal length");

    MeiDocument doc;
    doc.av_target = std::move(av_target);
    doc.notes.reserve(notes.size());
    doc.whens.reserve(notes.size());

    for (size_t i = 0; i < notes.size(); ++i) {
        const TranscribedNote& note = notes[i];
        if (note.id.empty())
            throw UsageError("build_document: note " + std::to_string(i) + " has no id");
        const DescriptorFrameSeries& series = records[i].first;
        const NoteSummary& summary = records[i].second;

        doc.notes.push_back({note.id, names[i]});

        ExtDataPayload p;
        p.onset_s = note.onset_s;
        p.duration_s = note.duration_s;
        p.frame_hop_s = series.grid.hop_s;
        p.frame_count = static_cast<long long>(series.grid.count());
        p.f0_hz = series.f0_hz;
        p.power_db.reserve(series.power_db.size());
        for (double db : series.power_db)
            p.power_db.emplace_back(db);
        p.spectral_centroid_hz = series.spectral_centroid_hz;
        p.spectral_flux = series.spectral_flux;
        p.spectral_slope = series.spectral_slope;
        p.spectral_flatness = series.spectral_flatness;
        p.perceived_pitch_hz = summary.perceived_pitch_hz;
        p.jitter = summary.jitter;
        p.vibrato_rate_hz = summary.vibrato_rate_hz;
        p.vibrato_depth_cents = summary.vibrato_depth_cents;
        p.mean_power_db = summary.mean_power_db;
        p.shimmer = summary.shimmer;
        p.mean_spectral_centroid_hz = summary.mean_spectral_centroid_hz;
        p.mean_spectral_flux = summary.mean_spectral_flux;
        p.mean_spectral_slope = summary.mean_spectral_slope;
        p.mean_spectral_flatness = summary.mean_spectral_flatness;

        doc.whens.push_back({note.onset_s, note.id, std::move(p)});
    }
    return doc;
}

std::string serialize_mei(const MeiDocument& doc) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<mei xmlns=\"";
    out += kMeiNs;
    out += "\" meiversion=\"5.0\">\n";
    out += "  <meiHead>\n"
           "    <fileDesc>\n"
           "      <titleStmt>\n"
           "        <title/>\n"
           "      </titleStmt>\n"
           "      <pubStmt/>\n"
           "    </fileDesc>\n"
           "  </meiHead>\n";
    out += "  <music>\n";
    out += "    <performance>\n";
    out += "      <recording>\n";
    out += "        <avFile target=\"" + escape_xml(doc.av_target) + "\"/>\n";
    for (const MeiWhen& w : doc.whens) {
        out += "        <when absolute=\"" + format_absolute(w.absolute_s) + "\" data=\"#" +
               escape_xml(w.target_id) + "\">\n";
        out += "          <extData><![CDATA[" + json_encode_payload(w.payload) + "]]></extData>\n";
        out += "        </when>\n";
    }
    out += "      </recording>\n";
    out += "    </performance>\n";
    out += "    <body>\n"
           "      <mdiv>\n"
           "        <score>\n"
           "          <scoreDef>\n"
           "            <staffGrp>\n"
           "              <staffDef n=\"1\" lines=\"5\"/>\n"
           "            </staffGrp>\n"
           "          </scoreDef>\n"
           "          <section>\n"
           "            <measure n=\"1\">\n"
           "              <staff n=\"1\">\n"
           "                <layer n=\"1\">\n";
    for (const MeiNote& n : doc.notes) {
        out += "                  <note xml:id=\"" + escape_xml(n.id) + "\" pname=\"";
        out += n.name.pname;
        out += "\" oct=\"" + std::to_string(n.name.octave) + "\"";
        if (const char* code = accid_ges_code(n.name.accidental)) {
            out += " accid.ges=\"";
            out += code;
            out += "\"";
        }
        out += "/>\n";
    }
    out += "                </layer>\n"
           "              </staff>\n"
           "            </measure>\n"
           "          </section>\n"
           "        </score>\n"
           "      </mdiv>\n"
           "    </body>\n"
           "  </music>\n"
           "</mei>\n";
    return out;
}

MeiParseResult parse_mei(const std::string& xml, ParseMode mode) {
    const bool lenient = mode == ParseMode::Lenient;
    MeiParseResult result;
    auto warn_or_throw = [&](const std::string& msg) {
        if (lenient)
            result.warnings.push_back(msg);
        else
            throw ValidationError(msg);
    };

    detail::XmlNode root = detail::xml_parse(xml);
    if (detail::local_name(root.name) != "mei")
        throw ParseError("root element is <" + root.name + ">, expected <mei>");

    const detail::XmlNode* music = root.first_child("music");
    if (!music)
        throw ParseError("document has no <music> element");

    // score side
    std::vector<const detail::XmlNode*> note_nodes;
    if (const detail::XmlNode* body = music->first_child("body"))
        body->collect("note", note_nodes);
    std::set<std::string> ids;
    for (const detail::XmlNode* n : note_nodes) {
        const std::string* id = n->attr("xml:id");
        if (!id || id->empty()) {
            warn_or_throw("note element without xml:id (line " + std::to_string(n->line) + ")");
            continue;
        }
        if (!ids.insert(*id).second) {
            warn_or_throw("duplicate xml:id '" + *id + "'");
            continue;
        }
        const std::string* pname = n->attr("pname");
        const std::string* oct = n->attr("oct");
        if (!pname || pname->size() != 1 || (*pname)[0] < 'a' || (*pname)[0] > 'g') {
            warn_or_throw("note '" + *id + "' has a missing or invalid pname");
            continue;
        }
        bool oct_ok = false;
        int octave = oct ? parse_int_attr(*oct, &oct_ok) : 0;
        if (!oct || !oct_ok || octave < -1 || octave > 9) {
            warn_or_throw("note '" + *id + "' has a missing or invalid oct");
            continue;
        }
        Accidental accid = Accidental::Natural;
        if (const std::string* a = n->attr("accid.ges")) {
            if (*a == "s")
                accid = Accidental::Sharp;
            else if (*a == "f")
                accid = Accidental::Flat;
            else {
                warn_or_throw("note '" + *id + "' has unsupported accid.ges '" + *a + "'");
                continue;
            }
        }
        result.doc.notes.push_back({*id, NoteName{(*pname)[0], accid, octave}});
    }

    // performance side
    std::vector<const detail::XmlNode*> when_nodes;
    if (const detail::XmlNode* performance = music->first_child("performance")) {
        std::vector<const detail::XmlNode*> av_nodes;
        performance->collect("avFile", av_nodes);
        if (!av_nodes.empty())
            if (const std::string* target = av_nodes.front()->attr("target"))
                result.doc.av_target = *target;
        performance->collect("when", when_nodes);
    }

    for (const detail::XmlNode* w : when_nodes) {
        const std::string* absolute = w->attr("absolute");
        const std::string* data = w->attr("data");
        if (!absolute || !data) {
            warn_or_throw("when element missing absolute or data (line " +
                          std::to_string(w->line) + ")");
            continue;
        }
        std::string target = *data;
        if (!target.empty() && target[0] == '#')
            target.erase(0, 1);
        if (target.empty()) {
            warn_or_throw("when element has an empty data reference (line " +
                          std::to_string(w->line) + ")");
            continue;
        }

        double abs_s = 0.0;
        try {
            abs_s = parse_absolute(*absolute, mode);
        } catch (const ParseError& e) {
            if (!lenient)
                throw ParseError("when for '" + target + "': " + e.what());
            result.warnings.push_back("when for '" + target + "': " + e.what());
            continue;
        }

        const detail::XmlNode* ext = w->first_child("extData");
        if (!ext) {
            warn_or_throw("when for '" + target + "' has no extData");
            continue;
        }
        ExtDataPayload payload;
        try {
            payload = json_decode_payload(cdata_text(*ext), mode);
        } catch (const ParseError& e) {
            throw ParseError("payload for '" + target + "': " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("payload for '" + target + "': " + e.what());
        }
        result.doc.whens.push_back({abs_s, std::move(target), std::move(payload)});
    }

    // link check
    for (const MeiWhen& w : result.doc.whens) {
        if (!ids.contains(w.target_id)) {
            if (lenient)
                result.warnings.push_back("when references missing xml:id '" + w.target_id + "'");
            else
                throw ValidationError("when references missing xml:id '" + w.target_id + "'");
        }
    }
    return result;
}

std::vector<Violation> validate_document(const MeiDocument& doc, bool check_links) {
    std::vector<Violation> out;
    auto add = [&](std::string where, std::string message) {
        out.push_back({std::move(where), std::move(message)});
    };

    if (check_links) {
        std::set<std::string> seen;
        for (const MeiNote& n : doc.notes)
            if (!seen.insert(n.id).second)
                add(n.id, "duplicate note id");
        if (doc.notes.size() != doc.whens.size())
            add("document", "note/when count mismatch: " + std::to_string(doc.notes.size()) +
                                " notes vs " + std::to_string(doc.whens.size()) + " whens");
        const size_t pairs = std::min(doc.notes.size(), doc.whens.size());
        for (size_t i = 0; i < pairs; ++i)
            if (doc.whens[i].target_id != doc.notes[i].id)
                add("when[" + std::to_string(i) + "]",
                    "targets '" + doc.whens[i].target_id + "' but note " + std::to_string(i) +
                        " is '" + doc.notes[i].id + "'");
    }

    for (size_t i = 1; i < doc.whens.size(); ++i)
        if (doc.whens[i].absolute_s + 1e-9 < doc.whens[i - 1].absolute_s)
            add("when[" + std::to_string(i) + "]", "absolute times decrease in document order");

    for (const MeiWhen& w : doc.whens) {
        const ExtDataPayload& p = w.payload;
        const std::string& id = w.target_id;
        if (p.schema != kPayloadSchema)
            add(id, "unexpected payload schema '" + p.schema + "'");
        if (!(p.duration_s > 0))
            add(id, "payload duration must be positive");
        if (p.frame_count > 0 && !(p.frame_hop_s > 0))
            add(id, "payload frame hop must be positive");

        const std::pair<const char*, const std::vector<std::optional<double>>*> tracks[6] = {
            {"f0_hz", &p.f0_hz},
            {"power_db", &p.power_db},
            {"spectral_centroid_hz", &p.spectral_centroid_hz},
            {"spectral_flux", &p.spectral_flux},
            {"spectral_slope", &p.spectral_slope},
            {"spectral_flatness", &p.spectral_flatness}};
        for (const auto& [name, track] : tracks)
            if (static_cast<long long>(track->size()) != p.frame_count)
                add(id, std::string("continuous.") + name + " has length " +
                            std::to_string(track->size()) + " but frame.count is " +
                            std::to_string(p.frame_count));

        const double mismatch_ms = std::abs(p.onset_s - w.absolute_s) * 1000.0;
        if (mismatch_ms > 1.0 + 1e-6) {
            std::ostringstream msg;
            msg << "onset mismatch: payload onset " << p.onset_s << " s vs when absolute "
                << w.absolute_s << " s (" << std::llround(mismatch_ms) << " ms)";
            add(id, msg.str());
        }

        for (const auto& v : p.spectral_flatness)
            if (v && (*v < 0.0 || *v > 1.0)) {
                add(id, "continuous spectral_flatness value " + format_number(*v) +
                            " outside [0, 1]");
                break;
            }
        if (p.mean_spectral_flatness &&
            (*p.mean_spectral_flatness < 0.0 || *p.mean_spectral_flatness > 1.0))
            add(id, "summary mean_spectral_flatness " + format_number(*p.mean_spectral_flatness) +
                        " outside [0, 1]");
    }
    return out;
}

} // namespace meiperf
