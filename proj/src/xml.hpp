#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace meiperf::detail {

// A small non-validating XML reader covering what MEI documents need:
// elements, attributes, text with entity references, CDATA sections,
// comments, processing instructions, and a skipped DOCTYPE.

struct XmlAttr {
    std::string name;
    std::string value;
};

struct XmlNode {
    enum class Kind { Element, Text, Cdata };
    Kind kind = Kind::Element;
    std::string name;   // element name as written (possibly prefixed)
    std::string text;   // Text/Cdata content
    std::vector<XmlAttr> attrs;
    std::vector<XmlNode> children;
    int line = 0;
    int col = 0;

    const std::string* attr(std::string_view name) const;
    const XmlNode* first_child(std::string_view local) const;
    /// Depth-first collection of descendant elements with the local name.
    void collect(std::string_view local, std::vector<const XmlNode*>& out) const;
};

/// Element name without any namespace prefix.
std::string_view local_name(std::string_view qualified);

/// Parse a complete document; returns the root element.
/// Throws ParseError with "line L, column C" locations.
XmlNode xml_parse(std::string_view input);

} // namespace meiperf::detail
