#include "xml.hpp"

#include <cctype>
#include <cstdlib>

#include "meiperf/errors.hpp"

namespace meiperf::detail {

namespace {

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' ||
           c == '.';
}

class Parser {
public:
    explicit Parser(std::string_view in) : in_(in) {}

    XmlNode parse_document() {
        if (in_.substr(0, 3) == "\xEF\xBB\xBF")
            advance(3);
        skip_misc();
        if (!at('<'))
            fail("expected root element");
        XmlNode root = parse_element();
        skip_misc();
        if (pos_ != in_.size())
            fail("content after root element");
        return root;
    }

private:
    std::string_view in_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("line " + std::to_string(line_) + ", column " + std::to_string(col_) +
                         ": " + msg);
    }

    bool eof() const { return pos_ >= in_.size(); }
    char peek() const { return eof() ? '\0' : in_[pos_]; }
    bool at(char c) const { return peek() == c; }

    bool starts_with(std::string_view s) const {
        return in_.substr(pos_, s.size()) == s;
    }

    void advance(size_t n = 1) {
        for (size_t i = 0; i < n && pos_ < in_.size(); ++i, ++pos_) {
            if (in_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek())))
            advance();
    }

    void expect(char c) {
        if (!at(c))
            fail(std::string("expected '") + c + "'");
        advance();
    }

    void skip_until(std::string_view terminator, const char* what) {
        while (!eof() && !starts_with(terminator))
            advance();
        if (eof())
            fail(std::string("unterminated ") + what);
        advance(terminator.size());
    }

    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<?"))
                skip_until("?>", "processing instruction");
            else if (starts_with("<!--"))
                skip_until("-->", "comment");
            else if (starts_with("<!DOCTYPE"))
                skip_until(">", "DOCTYPE"); // no internal-subset support
            else
                return;
        }
    }

    std::string parse_name() {
        if (!is_name_start(peek()))
            fail("expected a name");
        size_t start = pos_;
        while (!eof() && is_name_char(peek()))
            advance();
        return std::string(in_.substr(start, pos_ - start));
    }

    void append_entity(std::string& out) {
        advance(); // '&'
        size_t start = pos_;
        while (!eof() && peek() != ';' && pos_ - start < 12)
            advance();
        if (!at(';'))
            fail("unterminated entity reference");
        std::string_view name = in_.substr(start, pos_ - start);
        advance();
        if (name == "amp")
            out += '&';
        else if (name == "lt")
            out += '<';
        else if (name == "gt")
            out += '>';
        else if (name == "quot")
            out += '"';
        else if (name == "apos")
            out += '\'';
        else if (!name.empty() && name[0] == '#') {
            long code = 0;
            if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X'))
                code = std::strtol(std::string(name.substr(2)).c_str(), nullptr, 16);
            else
                code = std::strtol(std::string(name.substr(1)).c_str(), nullptr, 10);
            if (code <= 0 || code > 0x10FFFF)
                fail("invalid character reference");
            // UTF-8 encode
            unsigned cp = static_cast<unsigned>(code);
            if (cp < 0x80) {
                out += static_cast<char>(cp);
            } else if (cp < 0x800) {
                out += static_cast<char>(0xC0 | (cp >> 6));
                out += static_cast<char>(0x80 | (cp & 0x3F));
            } else if (cp < 0x10000) {
                out += static_cast<char>(0xE0 | (cp >> 12));
                out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                out += static_cast<char>(0x80 | (cp & 0x3F));
            } else {
                out += static_cast<char>(0xF0 | (cp >> 18));
                out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
                out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                out += static_cast<char>(0x80 | (cp & 0x3F));
            }
        } else {
            fail("unknown entity '&" + std::string(name) + ";'");
        }
    }

    std::string parse_attr_value() {
        char quote = peek();
        if (quote != '"' && quote != '\'')
            fail("expected quoted attribute value");
        advance();
        std::string out;
        while (!eof() && peek() != quote) {
            if (at('&'))
                append_entity(out);
            else {
                out += peek();
                advance();
            }
        }
        if (eof())
            fail("unterminated attribute value");
        advance();
        return out;
    }

    XmlNode parse_element() {
        XmlNode node;
        node.line = line_;
        node.col = col_;
        expect('<');
        node.name = parse_name();

        for (;;) {
            skip_ws();
            if (at('/')) {
                advance();
                expect('>');
                return node;
            }
            if (at('>')) {
                advance();
                break;
            }
            XmlAttr attr;
            attr.name = parse_name();
            skip_ws();
            expect('=');
            skip_ws();
            attr.value = parse_attr_value();
            node.attrs.push_back(std::move(attr));
        }

        // content
        for (;;) {
            if (eof())
                fail("unexpected end of input inside <" + node.name + ">");
            if (starts_with("<![CDATA[")) {
                XmlNode cdata;
                cdata.kind = XmlNode::Kind::Cdata;
                cdata.line = line_;
                cdata.col = col_;
                advance(9);
                size_t start = pos_;
                while (!eof() && !starts_with("]]>"))
                    advance();
                if (eof())
                    fail("unterminated CDATA section");
                cdata.text = std::string(in_.substr(start, pos_ - start));
                advance(3);
                node.children.push_back(std::move(cdata));
            } else if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (starts_with("</")) {
                advance(2);
                std::string closing = parse_name();
                if (closing != node.name)
                    fail("mismatched closing tag </" + closing + "> for <" + node.name + ">");
                skip_ws();
                expect('>');
                return node;
            } else if (at('<')) {
                node.children.push_back(parse_element());
            } else {
                XmlNode text;
                text.kind = XmlNode::Kind::Text;
                text.line = line_;
                text.col = col_;
                while (!eof() && !at('<')) {
                    if (at('&'))
                        append_entity(text.text);
                    else {
                        text.text += peek();
                        advance();
                    }
                }
                node.children.push_back(std::move(text));
            }
        }
    }
};

} // namespace

std::string_view local_name(std::string_view qualified) {
    size_t colon = qualified.rfind(':');
    return colon == std::string_view::npos ? qualified : qualified.substr(colon + 1);
}

const std::string* XmlNode::attr(std::string_view name) const {
    for (const auto& a : attrs)
        if (a.name == name)
            return &a.value;
    return nullptr;
}

const XmlNode* XmlNode::first_child(std::string_view local) const {
    for (const auto& c : children)
        if (c.kind == Kind::Element && local_name(c.name) == local)
            return &c;
    return nullptr;
}

void XmlNode::collect(std::string_view local, std::vector<const XmlNode*>& out) const {
    for (const auto& c : children) {
        if (c.kind != Kind::Element)
            continue;
        if (local_name(c.name) == local)
            out.push_back(&c);
        c.collect(local, out);
    }
}

XmlNode xml_parse(std::string_view input) {
    Parser p(input);
    return p.parse_document();
}

} // namespace meiperf::detail
