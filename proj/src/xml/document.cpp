#include "gridmap/xml/document.hpp"

#include <charconv>

namespace gridmap::xml {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c)
{
    auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c)
{
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, char32_t cp)
{
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
}

}  // namespace

// --------------------------------------------------------------------

const Node* Node::attribute(std::string_view name) const noexcept
{
    for (const auto& a : attributes_)
        if (a->name_ == name)
            return a.get();
    return nullptr;
}

std::string Node::string_value() const
{
    if (kind_ == NodeKind::Text || kind_ == NodeKind::Attribute)
        return value_;
    std::string result;
    for (const auto& child : children_) {
        if (child->kind_ == NodeKind::Text)
            result += child->value_;
        else
            result += child->string_value();
    }
    return result;
}

const Node* Node::document_element() const noexcept
{
    for (const auto& child : children_)
        if (child->kind_ == NodeKind::Element)
            return child.get();
    return nullptr;
}

Document::Document() : root_(std::make_unique<Node>()) {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column)
{
}

// --------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Document parse()
    {
        Document doc;
        if (text_.substr(0, 3) == "\xEF\xBB\xBF")
            pos_ = 3;

        skip_misc(true);
        if (at_end())
            fail("no root element");
        if (!starts_with("<") || starts_with("</"))
            fail("expected root element");

        auto root_element = parse_element(doc.root_.get());
        doc.root_->children_.push_back(std::move(root_element));

        skip_misc(false);
        if (!at_end()) {
            if (starts_with("<") && pos_ + 1 < text_.size() && is_name_start(text_[pos_ + 1]))
                fail("multiple root elements");
            fail("content after root element");
        }

        std::size_t next = 0;
        number_nodes(*doc.root_, next);
        return doc;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    static void number_nodes(Node& node, std::size_t& next)
    {
        node.order_ = next++;
        for (auto& a : node.attributes_)
            a->order_ = next++;
        for (auto& c : node.children_)
            number_nodes(*c, next);
    }

    [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

    [[noreturn]] void fail_at(std::size_t at, const std::string& what) const
    {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(line, column, what);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_space()
    {
        while (!at_end() && is_space(text_[pos_]))
            ++pos_;
    }

    void expect(std::string_view s)
    {
        if (!starts_with(s))
            fail("expected '" + std::string(s) + "'");
        pos_ += s.size();
    }

    // Whitespace, comments and PIs around the document element.
    void skip_misc(bool prolog)
    {
        bool first = true;
        for (;;) {
            skip_space();
            if (starts_with("<?")) {
                bool decl = starts_with("<?xml") && pos_ + 5 < text_.size() && is_space(text_[pos_ + 5]);
                if (decl && !(prolog && first && pos_ <= 3))
                    fail("XML declaration not at start of document");
                skip_pi();
            } else if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<!DOCTYPE")) {
                fail("DTD not supported");
            } else if (!at_end() && text_[pos_] != '<') {
                fail(prolog ? "text before root element" : "content after root element");
            } else {
                return;
            }
            first = false;
        }
    }

    void skip_comment()
    {
        auto end = text_.find("-->", pos_ + 4);
        if (end == std::string_view::npos)
            fail("unterminated comment");
        pos_ = end + 3;
    }

    void skip_pi()
    {
        auto end = text_.find("?>", pos_ + 2);
        if (end == std::string_view::npos)
            fail("unterminated processing instruction");
        pos_ = end + 2;
    }

    std::string parse_name()
    {
        if (at_end() || !is_name_start(text_[pos_]))
            fail("expected name");
        auto start = pos_;
        while (!at_end() && is_name_char(text_[pos_]))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    void parse_reference(std::string& out)
    {
        auto start = pos_;
        auto end = text_.find(';', pos_);
        if (end == std::string_view::npos || end - pos_ > 12)
            fail("malformed entity reference");
        auto ref = text_.substr(pos_ + 1, end - pos_ - 1);
        pos_ = end + 1;

        if (ref == "amp")
            out += '&';
        else if (ref == "lt")
            out += '<';
        else if (ref == "gt")
            out += '>';
        else if (ref == "quot")
            out += '"';
        else if (ref == "apos")
            out += '\'';
        else if (ref.size() > 1 && ref[0] == '#') {
            unsigned long cp = 0;
            std::from_chars_result r{};
            if (ref[1] == 'x')
                r = std::from_chars(ref.data() + 2, ref.data() + ref.size(), cp, 16);
            else
                r = std::from_chars(ref.data() + 1, ref.data() + ref.size(), cp, 10);
            if (r.ec != std::errc() || r.ptr != ref.data() + ref.size() || cp == 0 || cp > 0x10FFFF ||
                (cp >= 0xD800 && cp <= 0xDFFF))
                fail_at(start, "invalid character reference '&" + std::string(ref) + ";'");
            append_utf8(out, static_cast<char32_t>(cp));
        } else {
            fail_at(start, "unknown entity '&" + std::string(ref) + ";'");
        }
    }

    std::string parse_attribute_value()
    {
        char quote = peek();
        if (quote != '"' && quote != '\'')
            fail("expected quoted attribute value");
        ++pos_;
        std::string value;
        for (;;) {
            if (at_end())
                fail("unterminated attribute value");
            char c = text_[pos_];
            if (c == quote) {
                ++pos_;
                return value;
            }
            if (c == '<')
                fail("'<' in attribute value");
            if (c == '&') {
                parse_reference(value);
                continue;
            }
            if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n')
                ++pos_;
            value += is_space(c) ? ' ' : c;
            ++pos_;
        }
    }

    std::unique_ptr<Node> parse_element(Node* parent)
    {
        auto tag_start = pos_;
        expect("<");
        auto element = std::make_unique<Node>();
        element->kind_ = NodeKind::Element;
        element->parent_ = parent;
        element->name_ = parse_name();

        for (;;) {
            bool had_space = !at_end() && is_space(text_[pos_]);
            skip_space();
            if (starts_with("/>")) {
                pos_ += 2;
                return element;
            }
            if (starts_with(">")) {
                ++pos_;
                break;
            }
            if (at_end())
                fail("unclosed start tag <" + element->name_ + ">");
            if (!had_space)
                fail("expected whitespace before attribute");
            auto attr_pos = pos_;
            auto attr = std::make_unique<Node>();
            attr->kind_ = NodeKind::Attribute;
            attr->parent_ = element.get();
            attr->name_ = parse_name();
            skip_space();
            expect("=");
            skip_space();
            attr->value_ = parse_attribute_value();
            if (element->attribute(attr->name_))
                fail_at(attr_pos, "duplicate attribute '" + attr->name_ + "'");
            element->attributes_.push_back(std::move(attr));
        }

        std::string text;
        auto flush_text = [&] {
            if (text.empty())
                return;
            auto node = std::make_unique<Node>();
            node->kind_ = NodeKind::Text;
            node->parent_ = element.get();
            node->value_ = std::move(text);
            text.clear();
            element->children_.push_back(std::move(node));
        };

        for (;;) {
            if (at_end())
                fail_at(tag_start, "unclosed element <" + element->name_ + ">");
            char c = text_[pos_];
            if (c == '<') {
                if (starts_with("</")) {
                    pos_ += 2;
                    auto close_pos = pos_;
                    auto name = parse_name();
                    if (name != element->name_)
                        fail_at(close_pos, "mismatched end tag </" + name + ">, expected </" + element->name_ + ">");
                    skip_space();
                    expect(">");
                    flush_text();
                    return element;
                }
                if (starts_with("<!--")) {
                    skip_comment();
                } else if (starts_with("<![CDATA[")) {
                    auto end = text_.find("]]>", pos_ + 9);
                    if (end == std::string_view::npos)
                        fail("unterminated CDATA section");
                    text.append(text_.substr(pos_ + 9, end - pos_ - 9));
                    pos_ = end + 3;
                } else if (starts_with("<?")) {
                    skip_pi();
                } else if (starts_with("<!")) {
                    fail("unsupported markup declaration");
                } else {
                    flush_text();
                    element->children_.push_back(parse_element(element.get()));
                }
            } else if (c == '&') {
                parse_reference(text);
            } else {
                if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n')
                    ++pos_;
                text += c == '\r' ? '\n' : c;
                ++pos_;
            }
        }
    }
};

Document parse_xml(std::string_view text)
{
    return Parser(text).parse();
}

bool is_well_formed(std::string_view text)
{
    try {
        parse_xml(text);
        return true;
    } catch (const ParseError&) {
        return false;
    }
}

std::string escape_text(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string escape_attribute(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
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

namespace {

void serialize_into(const Node& node, std::string& out)
{
    switch (node.kind()) {
    case NodeKind::Root:
        for (const auto& c : node.children())
            serialize_into(*c, out);
        break;
    case NodeKind::Text:
        out += escape_text(node.value());
        break;
    case NodeKind::Attribute:
        out += escape_attribute(node.value());
        break;
    case NodeKind::Element:
        out += '<';
        out += node.name();
        for (const auto& a : node.attributes()) {
            out += ' ';
            out += a->name();
            out += "=\"";
            out += escape_attribute(a->value());
            out += '"';
        }
        if (node.children().empty()) {
            out += "/>";
            break;
        }
        out += '>';
        for (const auto& c : node.children())
            serialize_into(*c, out);
        out += "</";
        out += node.name();
        out += '>';
        break;
    }
}

void collect_text(const Node& node, std::string& out)
{
    for (const auto& c : node.children()) {
        if (c->kind() == NodeKind::Text) {
            if (!out.empty())
                out += ' ';
            out += c->value();
        } else {
            collect_text(*c, out);
        }
    }
}

}  // namespace

std::string serialize(const Node& node)
{
    std::string out;
    serialize_into(node, out);
    return out;
}

std::string serialize(const Document& doc)
{
    return serialize(doc.root());
}

std::string joined_text(const Node& node)
{
    if (node.kind() == NodeKind::Text || node.kind() == NodeKind::Attribute)
        return node.value();
    std::string out;
    collect_text(node, out);
    return out;
}

}  // namespace gridmap::xml
