#include "gridmap/xml/xslt.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

namespace gridmap::xml {

namespace {

constexpr std::string_view kXsltNamespace = "http://www.w3.org/1999/XSL/Transform";

struct Instruction;
using Body = std::vector<Instruction>;

struct TextOut {
    std::string text;
};

struct ValueOf {
    XPathExpr select;
};

struct ApplyTemplates {
    std::optional<XPathExpr> select;
};

struct ForEach {
    XPathExpr select;
    Body body;
};

struct If {
    XPathExpr test;
    Body body;
};

struct When {
    XPathExpr test;
    Body body;
};

struct Choose {
    std::vector<When> whens;
    std::optional<Body> otherwise;
};

// Attribute value template: literal runs interleaved with expressions.
using AvtPart = std::variant<std::string, XPathExpr>;

struct LiteralAttribute {
    std::string name;
    std::vector<AvtPart> parts;
};

struct LiteralElement {
    std::string name;
    std::vector<LiteralAttribute> attributes;
    Body body;
};

struct Instruction {
    std::variant<TextOut, ValueOf, ApplyTemplates, ForEach, If, Choose, LiteralElement> op;
};

struct Template {
    XPathExpr match;
    double priority;
    std::size_t index;
    Body body;
};

bool is_void_element(std::string_view name)
{
    static const std::set<std::string_view> kVoid = {"area", "base", "br",   "col",   "embed",  "hr",    "img",
                                                     "input", "link", "meta", "param", "source", "track", "wbr"};
    return kVoid.contains(name);
}

bool is_whitespace(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

bool is_instruction(const Node& n)
{
    return n.kind() == NodeKind::Element && n.name().starts_with("xsl:");
}

}  // namespace

struct CompiledStylesheet {
    std::vector<Template> templates;
};

namespace {

// --------------------------------------------------------------------
// Compilation

class Compiler {
public:
    CompiledStylesheet compile(const Document& doc)
    {
        const Node& root = doc.document_element();
        if (root.name() != "xsl:stylesheet" && root.name() != "xsl:transform")
            fail(root, "root element must be xsl:stylesheet or xsl:transform");
        auto* ns = root.attribute("xmlns:xsl");
        if (!ns || ns->value() != kXsltNamespace)
            fail(root, "xmlns:xsl must be bound to " + std::string(kXsltNamespace));
        for (const auto& a : root.attributes()) {
            const auto& n = a->name();
            if (n != "version" && n != "xmlns" && !n.starts_with("xmlns:") && n != "exclude-result-prefixes")
                fail(root, "unsupported attribute '" + n + "'");
        }

        CompiledStylesheet sheet;
        for (const auto& child : root.children()) {
            if (child->kind() == NodeKind::Text) {
                if (!is_whitespace(child->value()))
                    fail(root, "text is not allowed at the top level");
                continue;
            }
            if (child->name() == "xsl:template") {
                sheet.templates.push_back(compile_template(*child, sheet.templates.size()));
            } else if (child->name() == "xsl:output") {
                allow_attributes(*child, {"method", "indent", "omit-xml-declaration", "encoding"});
            } else if (is_instruction(*child)) {
                fail(*child, "unsupported top-level element");
            } else {
                fail(*child, "literal result elements are not allowed at the top level");
            }
        }
        if (sheet.templates.empty())
            throw StylesheetError("stylesheet has no templates");
        return sheet;
    }

private:
    [[noreturn]] static void fail(const Node& at, const std::string& what)
    {
        throw StylesheetError("<" + at.name() + ">: " + what);
    }

    static void allow_attributes(const Node& n, std::initializer_list<std::string_view> allowed)
    {
        for (const auto& a : n.attributes())
            if (std::find(allowed.begin(), allowed.end(), a->name()) == allowed.end())
                fail(n, "unsupported attribute '" + a->name() + "'");
    }

    static const std::string& required(const Node& n, std::string_view attr)
    {
        auto* a = n.attribute(attr);
        if (!a)
            fail(n, "missing required attribute '" + std::string(attr) + "'");
        return a->value();
    }

    static XPathExpr expression(const Node& n, const std::string& text, bool node_set)
    {
        try {
            auto e = XPathExpr::parse(text);
            if (node_set && !e.returns_node_set())
                fail(n, "'" + text + "' does not select a node-set");
            return e;
        } catch (const XPathError& e) {
            fail(n, e.what());
        }
    }

    static double default_priority(const XPathExpr& pattern)
    {
        const auto& path = std::get<ast::Path>(pattern.root().node);
        if (path.absolute || path.steps.size() != 1 || !path.steps[0].predicates.empty())
            return 0.5;
        return path.steps[0].test == ast::TestKind::Name ? 0.0 : -0.5;
    }

    static XPathExpr pattern(const Node& n, const std::string& text)
    {
        auto e = expression(n, text, true);
        const auto& path = std::get<ast::Path>(e.root().node);
        for (const auto& step : path.steps)
            if (step.axis == ast::Axis::Self || step.axis == ast::Axis::Parent)
                fail(n, "pattern '" + text + "' may only use child and attribute steps");
        if (!path.steps.empty() && path.steps.back().axis == ast::Axis::DescendantOrSelf)
            fail(n, "pattern '" + text + "' is incomplete");
        return e;
    }

    Template compile_template(const Node& n, std::size_t index)
    {
        allow_attributes(n, {"match"});
        auto match = pattern(n, required(n, "match"));
        double priority = default_priority(match);
        return Template{std::move(match), priority, index, compile_body(n)};
    }

    Body compile_body(const Node& parent)
    {
        Body body;
        for (const auto& child : parent.children()) {
            if (child->kind() == NodeKind::Text) {
                if (!is_whitespace(child->value()))
                    body.push_back(Instruction{TextOut{child->value()}});
                continue;
            }
            body.push_back(compile_instruction(*child));
        }
        return body;
    }

    Instruction compile_instruction(const Node& n)
    {
        const auto& name = n.name();
        if (!is_instruction(n))
            return Instruction{compile_literal(n)};

        if (name == "xsl:value-of") {
            allow_attributes(n, {"select"});
            no_children(n);
            return Instruction{ValueOf{expression(n, required(n, "select"), false)}};
        }
        if (name == "xsl:apply-templates") {
            allow_attributes(n, {"select"});
            no_children(n);
            ApplyTemplates at;
            if (auto* s = n.attribute("select"))
                at.select = expression(n, s->value(), true);
            return Instruction{std::move(at)};
        }
        if (name == "xsl:for-each") {
            allow_attributes(n, {"select"});
            return Instruction{ForEach{expression(n, required(n, "select"), true), compile_body(n)}};
        }
        if (name == "xsl:if") {
            allow_attributes(n, {"test"});
            return Instruction{If{expression(n, required(n, "test"), false), compile_body(n)}};
        }
        if (name == "xsl:choose") {
            allow_attributes(n, {});
            Choose choose;
            for (const auto& c : n.children()) {
                if (c->kind() == NodeKind::Text) {
                    if (!is_whitespace(c->value()))
                        fail(n, "text is not allowed inside xsl:choose");
                    continue;
                }
                if (c->name() == "xsl:when") {
                    if (choose.otherwise)
                        fail(*c, "xsl:when after xsl:otherwise");
                    allow_attributes(*c, {"test"});
                    choose.whens.push_back(When{expression(*c, required(*c, "test"), false), compile_body(*c)});
                } else if (c->name() == "xsl:otherwise") {
                    if (choose.otherwise)
                        fail(*c, "duplicate xsl:otherwise");
                    allow_attributes(*c, {});
                    choose.otherwise = compile_body(*c);
                } else {
                    fail(*c, "only xsl:when and xsl:otherwise are allowed inside xsl:choose");
                }
            }
            if (choose.whens.empty())
                fail(n, "xsl:choose requires at least one xsl:when");
            return Instruction{std::move(choose)};
        }
        if (name == "xsl:text") {
            allow_attributes(n, {});
            std::string text;
            for (const auto& c : n.children()) {
                if (c->kind() != NodeKind::Text)
                    fail(n, "xsl:text may only contain text");
                text += c->value();
            }
            return Instruction{TextOut{std::move(text)}};
        }
        fail(n, "unsupported instruction");
    }

    static void no_children(const Node& n)
    {
        for (const auto& c : n.children())
            if (c->kind() != NodeKind::Text || !is_whitespace(c->value()))
                fail(n, "must be empty");
    }

    LiteralElement compile_literal(const Node& n)
    {
        LiteralElement el;
        el.name = n.name();
        for (const auto& a : n.attributes()) {
            if (a->name() == "xmlns" || a->name().starts_with("xmlns:"))
                continue;
            if (a->name().starts_with("xsl:"))
                fail(n, "unsupported attribute '" + a->name() + "'");
            el.attributes.push_back(LiteralAttribute{a->name(), compile_avt(n, a->value())});
        }
        el.body = compile_body(n);
        return el;
    }

    static std::vector<AvtPart> compile_avt(const Node& n, const std::string& text)
    {
        std::vector<AvtPart> parts;
        std::string literal;
        for (std::size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
                literal += '{';
                ++i;
            } else if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
                literal += '}';
                ++i;
            } else if (c == '{') {
                auto end = text.find('}', i + 1);
                if (end == std::string::npos)
                    fail(n, "unterminated attribute value template '" + text + "'");
                if (!literal.empty())
                    parts.emplace_back(std::move(literal));
                literal.clear();
                parts.emplace_back(expression(n, text.substr(i + 1, end - i - 1), false));
                i = end;
            } else if (c == '}') {
                fail(n, "unmatched '}' in attribute value template '" + text + "'");
            } else {
                literal += c;
            }
        }
        if (!literal.empty())
            parts.emplace_back(std::move(literal));
        return parts;
    }
};

// --------------------------------------------------------------------
// Execution

bool contains(const NodeSet& set, const Node* n)
{
    return std::find(set.begin(), set.end(), n) != set.end();
}

bool pattern_matches(const XPathExpr& pattern, const Node& node)
{
    const auto& path = std::get<ast::Path>(pattern.root().node);
    if (path.absolute)
        return contains(std::get<NodeSet>(pattern.evaluate(node)), &node);
    for (const Node* ctx = node.parent(); ctx; ctx = ctx->parent())
        if (contains(std::get<NodeSet>(pattern.evaluate(*ctx)), &node))
            return true;
    return false;
}

class Transformer {
public:
    explicit Transformer(const CompiledStylesheet& sheet) : sheet_(sheet) {}

    std::string run(const Node& start)
    {
        apply_to({&start});
        return std::move(out_);
    }

private:
    const CompiledStylesheet& sheet_;
    std::string out_;
    std::size_t depth_ = 0;

    const Template* find_template(const Node& node) const
    {
        const Template* best = nullptr;
        for (const auto& t : sheet_.templates) {
            if (best && t.priority < best->priority)
                continue;
            if (pattern_matches(t.match, node))
                best = &t;
        }
        return best;
    }

    void apply_to(const NodeSet& nodes)
    {
        if (++depth_ > kMaxTemplateDepth)
            throw TransformError("apply-templates nested deeper than " + std::to_string(kMaxTemplateDepth) +
                                 " frames");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Node& node = *nodes[i];
            if (const auto* t = find_template(node)) {
                execute(t->body, node, i + 1, nodes.size());
                continue;
            }
            switch (node.kind()) {
            case NodeKind::Root:
            case NodeKind::Element: {
                NodeSet children;
                for (const auto& c : node.children())
                    children.push_back(c.get());
                apply_to(children);
                break;
            }
            case NodeKind::Text:
                out_ += escape_text(node.value());
                break;
            case NodeKind::Attribute:
                break;
            }
        }
        --depth_;
    }

    void execute(const Body& body, const Node& node, std::size_t position, std::size_t size)
    {
        for (const auto& ins : body)
            execute(ins, node, position, size);
    }

    void execute(const Instruction& ins, const Node& node, std::size_t position, std::size_t size)
    {
        std::visit(
            [&](const auto& op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, TextOut>) {
                    out_ += escape_text(op.text);
                } else if constexpr (std::is_same_v<T, ValueOf>) {
                    out_ += escape_text(to_string(op.select.evaluate(node, position, size)));
                } else if constexpr (std::is_same_v<T, ApplyTemplates>) {
                    if (op.select) {
                        apply_to(std::get<NodeSet>(op.select->evaluate(node, position, size)));
                    } else {
                        NodeSet children;
                        for (const auto& c : node.children())
                            children.push_back(c.get());
                        apply_to(children);
                    }
                } else if constexpr (std::is_same_v<T, ForEach>) {
                    auto nodes = std::get<NodeSet>(op.select.evaluate(node, position, size));
                    for (std::size_t i = 0; i < nodes.size(); ++i)
                        execute(op.body, *nodes[i], i + 1, nodes.size());
                } else if constexpr (std::is_same_v<T, If>) {
                    if (to_boolean(op.test.evaluate(node, position, size)))
                        execute(op.body, node, position, size);
                } else if constexpr (std::is_same_v<T, Choose>) {
                    for (const auto& w : op.whens) {
                        if (to_boolean(w.test.evaluate(node, position, size))) {
                            execute(w.body, node, position, size);
                            return;
                        }
                    }
                    if (op.otherwise)
                        execute(*op.otherwise, node, position, size);
                } else {
                    out_ += '<';
                    out_ += op.name;
                    for (const auto& attr : op.attributes) {
                        std::string value;
                        for (const auto& part : attr.parts) {
                            if (auto s = std::get_if<std::string>(&part))
                                value += *s;
                            else
                                value += to_string(std::get<XPathExpr>(part).evaluate(node, position, size));
                        }
                        out_ += ' ';
                        out_ += attr.name;
                        out_ += "=\"";
                        out_ += escape_attribute(value);
                        out_ += '"';
                    }
                    out_ += '>';
                    auto mark = out_.size();
                    execute(op.body, node, position, size);
                    if (is_void_element(op.name) && out_.size() == mark) {
                        out_.insert(mark - 1, "/");
                    } else {
                        out_ += "</";
                        out_ += op.name;
                        out_ += '>';
                    }
                }
            },
            ins.op);
    }
};

}  // namespace

// --------------------------------------------------------------------

Stylesheet Stylesheet::parse(std::string_view text)
{
    Document doc = [&] {
        try {
            return parse_xml(text);
        } catch (const ParseError& e) {
            throw StylesheetError(std::string("stylesheet is not well-formed: ") + e.what());
        }
    }();
    return Stylesheet(std::make_shared<const CompiledStylesheet>(Compiler().compile(doc)));
}

Stylesheet Stylesheet::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw StylesheetError("cannot open stylesheet " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str());
    } catch (const StylesheetError& e) {
        throw StylesheetError(path.string() + ": " + e.what());
    }
}

std::string Stylesheet::apply(const Document& doc) const
{
    return apply(doc.root());
}

std::string Stylesheet::apply(const Node& node) const
{
    return Transformer(*impl_).run(node);
}

std::size_t Stylesheet::template_count() const
{
    return impl_->templates.size();
}

}  // namespace gridmap::xml
