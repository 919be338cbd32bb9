#include "gridmap/xml/xpath.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

namespace gridmap::xml {

namespace ast {

bool returns_node_set(const Expr& expr)
{
    return std::holds_alternative<Path>(expr.node);
}

}  // namespace ast

namespace {

using namespace ast;

// --------------------------------------------------------------------
// Tokenizer

enum class Tok {
    End,
    Slash,
    DoubleSlash,
    LBracket,
    RBracket,
    LParen,
    RParen,
    At,
    Comma,
    Dot,
    DotDot,
    Star,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Name,
    Literal,
    Number,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0;
    std::size_t offset = 0;
};

bool is_name_start(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c)
{
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

[[noreturn]] void unsupported(std::string_view expr, std::size_t offset, const std::string& what)
{
    throw XPathError("unsupported expression '" + std::string(expr) + "' at offset " + std::to_string(offset) +
                     ": " + what);
}

std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;

    // "and"/"or" are operators only where an operand has just ended.
    auto operand_ended = [&] {
        if (out.empty())
            return false;
        switch (out.back().kind) {
        case Tok::RBracket:
        case Tok::RParen:
        case Tok::Dot:
        case Tok::DotDot:
        case Tok::Star:
        case Tok::Name:
        case Tok::Literal:
        case Tok::Number:
            return true;
        default:
            return false;
        }
    };

    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        Token t;
        t.offset = i;
        auto two = s.substr(i, 2);
        if (two == "//") {
            t.kind = Tok::DoubleSlash;
            i += 2;
        } else if (two == "!=") {
            t.kind = Tok::Ne;
            i += 2;
        } else if (two == "<=") {
            t.kind = Tok::Le;
            i += 2;
        } else if (two == ">=") {
            t.kind = Tok::Ge;
            i += 2;
        } else if (two == "..") {
            t.kind = Tok::DotDot;
            i += 2;
        } else if (two == "::") {
            unsupported(s, i, "axis specifiers are not supported");
        } else if (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
            auto start = i++;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                ++i;
            t.kind = Tok::Number;
            t.number = string_to_number(s.substr(start, i - start));
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            auto start = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                ++i;
            if (i < s.size() && s[i] == '.') {
                ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                    ++i;
            }
            t.kind = Tok::Number;
            t.number = string_to_number(s.substr(start, i - start));
        } else if (c == '"' || c == '\'') {
            auto end = s.find(c, i + 1);
            if (end == std::string_view::npos)
                unsupported(s, i, "unterminated string literal");
            t.kind = Tok::Literal;
            t.text = std::string(s.substr(i + 1, end - i - 1));
            i = end + 1;
        } else if (is_name_start(c)) {
            auto start = i;
            while (i < s.size() && is_name_char(s[i]))
                ++i;
            if (i < s.size() && s[i] == ':' && (i + 1 >= s.size() || s[i + 1] != ':'))
                unsupported(s, i, "namespace prefixes are not supported");
            t.text = std::string(s.substr(start, i - start));
            if (operand_ended() && t.text == "and")
                t.kind = Tok::And;
            else if (operand_ended() && t.text == "or")
                t.kind = Tok::Or;
            else if (operand_ended())
                unsupported(s, start, "unexpected name '" + t.text + "'");
            else
                t.kind = Tok::Name;
        } else {
            switch (c) {
            case '/': t.kind = Tok::Slash; break;
            case '[': t.kind = Tok::LBracket; break;
            case ']': t.kind = Tok::RBracket; break;
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case '@': t.kind = Tok::At; break;
            case ',': t.kind = Tok::Comma; break;
            case '.': t.kind = Tok::Dot; break;
            case '*': t.kind = Tok::Star; break;
            case '=': t.kind = Tok::Eq; break;
            case '<': t.kind = Tok::Lt; break;
            case '>': t.kind = Tok::Gt; break;
            default: unsupported(s, i, std::string("unexpected character '") + c + "'");
            }
            ++i;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.offset = s.size();
    out.push_back(end);
    return out;
}

// --------------------------------------------------------------------
// Parser

struct FunctionSig {
    std::string_view name;
    std::size_t min_args;
    std::size_t max_args;
    bool node_set_arg;
};

constexpr FunctionSig kFunctions[] = {
    {"count", 1, 1, true},
    {"not", 1, 1, false},
    {"name", 0, 1, true},
    {"string", 0, 1, false},
    {"number", 0, 1, false},
    {"concat", 2, std::numeric_limits<std::size_t>::max(), false},
    {"position", 0, 0, false},
    {"last", 0, 0, false},
};

ExprPtr make(auto node)
{
    auto e = std::make_shared<Expr>();
    e->node = std::move(node);
    return e;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text), tokens_(tokenize(text)) {}

    ExprPtr parse()
    {
        auto e = parse_or();
        if (peek().kind != Tok::End)
            fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
    Token next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    bool accept(Tok k)
    {
        if (peek().kind != k)
            return false;
        ++pos_;
        return true;
    }
    void expect(Tok k, const char* what)
    {
        if (!accept(k))
            fail(std::string("expected ") + what);
    }
    [[noreturn]] void fail(const std::string& what) const { unsupported(text_, peek().offset, what); }

    ExprPtr parse_or()
    {
        auto lhs = parse_and();
        while (accept(Tok::Or))
            lhs = make(Binary{Op::Or, lhs, parse_and()});
        return lhs;
    }

    ExprPtr parse_and()
    {
        auto lhs = parse_equality();
        while (accept(Tok::And))
            lhs = make(Binary{Op::And, lhs, parse_equality()});
        return lhs;
    }

    ExprPtr parse_equality()
    {
        auto lhs = parse_relational();
        for (;;) {
            if (accept(Tok::Eq))
                lhs = make(Binary{Op::Eq, lhs, parse_relational()});
            else if (accept(Tok::Ne))
                lhs = make(Binary{Op::Ne, lhs, parse_relational()});
            else
                return lhs;
        }
    }

    ExprPtr parse_relational()
    {
        auto lhs = parse_primary();
        for (;;) {
            Op op;
            switch (peek().kind) {
            case Tok::Lt: op = Op::Lt; break;
            case Tok::Le: op = Op::Le; break;
            case Tok::Gt: op = Op::Gt; break;
            case Tok::Ge: op = Op::Ge; break;
            default: return lhs;
            }
            ++pos_;
            lhs = make(Binary{op, lhs, parse_primary()});
        }
    }

    ExprPtr parse_primary()
    {
        const auto& t = peek();
        switch (t.kind) {
        case Tok::Literal:
            return make(ast::Literal{next().text});
        case Tok::Number:
            return make(ast::Number{next().number});
        case Tok::LParen: {
            ++pos_;
            auto e = parse_or();
            expect(Tok::RParen, "')'");
            if (peek().kind == Tok::LBracket || peek().kind == Tok::Slash || peek().kind == Tok::DoubleSlash)
                fail("filter expressions are not supported");
            return e;
        }
        case Tok::Name:
            if (peek(1).kind == Tok::LParen && t.text != "text" && t.text != "node")
                return parse_call();
            return parse_path();
        case Tok::Slash:
        case Tok::DoubleSlash:
        case Tok::At:
        case Tok::Dot:
        case Tok::DotDot:
        case Tok::Star:
            return parse_path();
        default:
            fail("expected expression");
        }
    }

    ExprPtr parse_call()
    {
        auto name_tok = next();
        ++pos_;  // '('
        const FunctionSig* sig = nullptr;
        for (const auto& f : kFunctions)
            if (f.name == name_tok.text)
                sig = &f;
        if (!sig)
            unsupported(text_, name_tok.offset, "unknown function '" + name_tok.text + "'");

        Call call{name_tok.text, {}};
        if (!accept(Tok::RParen)) {
            do {
                call.args.push_back(parse_or());
            } while (accept(Tok::Comma));
            expect(Tok::RParen, "')'");
        }
        if (call.args.size() < sig->min_args || call.args.size() > sig->max_args)
            unsupported(text_, name_tok.offset, "wrong number of arguments to " + name_tok.text + "()");
        if (sig->node_set_arg)
            for (const auto& a : call.args)
                if (!returns_node_set(*a))
                    unsupported(text_, name_tok.offset, name_tok.text + "() requires a node-set argument");
        return make(std::move(call));
    }

    static Step descendant_or_self()
    {
        Step s;
        s.axis = Axis::DescendantOrSelf;
        s.test = TestKind::Node;
        return s;
    }

    bool at_step_start() const
    {
        switch (peek().kind) {
        case Tok::Name:
        case Tok::At:
        case Tok::Dot:
        case Tok::DotDot:
        case Tok::Star:
            return true;
        default:
            return false;
        }
    }

    ExprPtr parse_path()
    {
        Path path;
        if (accept(Tok::Slash)) {
            path.absolute = true;
            if (!at_step_start())
                return make(std::move(path));
        } else if (accept(Tok::DoubleSlash)) {
            path.absolute = true;
            path.steps.push_back(descendant_or_self());
        }

        path.steps.push_back(parse_step());
        for (;;) {
            if (accept(Tok::Slash)) {
                path.steps.push_back(parse_step());
            } else if (accept(Tok::DoubleSlash)) {
                path.steps.push_back(descendant_or_self());
                path.steps.push_back(parse_step());
            } else {
                return make(std::move(path));
            }
        }
    }

    Step parse_step()
    {
        Step step;
        if (accept(Tok::Dot)) {
            step.axis = Axis::Self;
            step.test = TestKind::Node;
            return step;
        }
        if (accept(Tok::DotDot)) {
            step.axis = Axis::Parent;
            step.test = TestKind::Node;
            return step;
        }
        if (accept(Tok::At)) {
            step.axis = Axis::Attribute;
            if (accept(Tok::Star))
                step.test = TestKind::Any;
            else if (peek().kind == Tok::Name && peek(1).kind != Tok::LParen)
                step.name = next().text;
            else
                fail("expected attribute name");
        } else if (accept(Tok::Star)) {
            step.test = TestKind::Any;
        } else if (peek().kind == Tok::Name) {
            auto t = next();
            if (peek().kind == Tok::LParen) {
                if (t.text != "text")
                    unsupported(text_, t.offset, "node test '" + t.text + "()' is not supported");
                ++pos_;
                expect(Tok::RParen, "')'");
                step.test = TestKind::Text;
            } else {
                step.name = t.text;
            }
        } else {
            fail("expected location step");
        }

        while (accept(Tok::LBracket)) {
            step.predicates.push_back(parse_or());
            expect(Tok::RBracket, "']'");
        }
        return step;
    }
};

// --------------------------------------------------------------------
// Evaluation

struct Context {
    const Node* node;
    std::size_t position;
    std::size_t size;
};

void sort_document_order(NodeSet& nodes)
{
    std::sort(nodes.begin(), nodes.end(), [](const Node* a, const Node* b) { return a->order() < b->order(); });
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
}

const Node* root_of(const Node* n)
{
    while (n->parent())
        n = n->parent();
    return n;
}

bool matches_test(const Step& step, const Node& n)
{
    switch (step.test) {
    case TestKind::Node:
        return true;
    case TestKind::Text:
        return n.kind() == NodeKind::Text;
    case TestKind::Any:
        return step.axis == Axis::Attribute ? n.kind() == NodeKind::Attribute : n.kind() == NodeKind::Element;
    case TestKind::Name:
        if (step.axis == Axis::Attribute)
            return n.kind() == NodeKind::Attribute && n.name() == step.name;
        return n.kind() == NodeKind::Element && n.name() == step.name;
    }
    return false;
}

void descendants_or_self(const Node* n, NodeSet& out)
{
    out.push_back(n);
    for (const auto& c : n->children())
        descendants_or_self(c.get(), out);
}

Value eval(const Expr& e, const Context& ctx);

bool compare_values(Op op, const Value& a, const Value& b);

NodeSet apply_predicates(NodeSet nodes, const std::vector<ExprPtr>& predicates)
{
    for (const auto& pred : predicates) {
        NodeSet kept;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            auto v = eval(*pred, Context{nodes[i], i + 1, nodes.size()});
            bool keep = std::holds_alternative<double>(v) ? std::get<double>(v) == static_cast<double>(i + 1)
                                                           : to_boolean(v);
            if (keep)
                kept.push_back(nodes[i]);
        }
        nodes = std::move(kept);
    }
    return nodes;
}

NodeSet eval_step(const Step& step, const Node* context)
{
    NodeSet candidates;
    switch (step.axis) {
    case Axis::Child:
        for (const auto& c : context->children())
            candidates.push_back(c.get());
        break;
    case Axis::Attribute:
        for (const auto& a : context->attributes())
            candidates.push_back(a.get());
        break;
    case Axis::Self:
        candidates.push_back(context);
        break;
    case Axis::Parent:
        if (context->parent())
            candidates.push_back(context->parent());
        break;
    case Axis::DescendantOrSelf:
        descendants_or_self(context, candidates);
        break;
    }
    NodeSet matched;
    for (const auto* n : candidates)
        if (matches_test(step, *n))
            matched.push_back(n);
    return apply_predicates(std::move(matched), step.predicates);
}

NodeSet eval_path(const Path& path, const Node* context)
{
    NodeSet current{path.absolute ? root_of(context) : context};
    for (const auto& step : path.steps) {
        NodeSet next;
        for (const auto* n : current) {
            auto part = eval_step(step, n);
            next.insert(next.end(), part.begin(), part.end());
        }
        sort_document_order(next);
        current = std::move(next);
    }
    return current;
}

Value call_function(const Call& call, const Context& ctx)
{
    const auto& f = call.function;
    if (f == "position")
        return static_cast<double>(ctx.position);
    if (f == "last")
        return static_cast<double>(ctx.size);
    if (f == "count")
        return static_cast<double>(std::get<NodeSet>(eval(*call.args[0], ctx)).size());
    if (f == "not")
        return !to_boolean(eval(*call.args[0], ctx));
    if (f == "name") {
        const Node* n = ctx.node;
        if (!call.args.empty()) {
            auto ns = std::get<NodeSet>(eval(*call.args[0], ctx));
            if (ns.empty())
                return std::string();
            n = ns.front();
        }
        return n->name();
    }
    if (f == "string")
        return call.args.empty() ? ctx.node->string_value() : to_string(eval(*call.args[0], ctx));
    if (f == "number")
        return call.args.empty() ? string_to_number(ctx.node->string_value()) : to_number(eval(*call.args[0], ctx));
    if (f == "concat") {
        std::string out;
        for (const auto& a : call.args)
            out += to_string(eval(*a, ctx));
        return out;
    }
    throw XPathError("unknown function '" + f + "'");
}

Value eval(const Expr& e, const Context& ctx)
{
    return std::visit(
        [&](const auto& n) -> Value {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Path>) {
                return eval_path(n, ctx.node);
            } else if constexpr (std::is_same_v<T, ast::Literal>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, ast::Number>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Call>) {
                return call_function(n, ctx);
            } else {
                if (n.op == Op::Or)
                    return to_boolean(eval(*n.lhs, ctx)) || to_boolean(eval(*n.rhs, ctx));
                if (n.op == Op::And)
                    return to_boolean(eval(*n.lhs, ctx)) && to_boolean(eval(*n.rhs, ctx));
                return compare_values(n.op, eval(*n.lhs, ctx), eval(*n.rhs, ctx));
            }
        },
        e.node);
}

bool compare_atoms(Op op, const Value& a, const Value& b)
{
    if (op == Op::Eq || op == Op::Ne) {
        bool eq;
        if (std::holds_alternative<bool>(a) || std::holds_alternative<bool>(b))
            eq = to_boolean(a) == to_boolean(b);
        else if (std::holds_alternative<double>(a) || std::holds_alternative<double>(b))
            eq = to_number(a) == to_number(b);
        else
            eq = to_string(a) == to_string(b);
        return op == Op::Eq ? eq : !eq;
    }
    double x = to_number(a), y = to_number(b);
    switch (op) {
    case Op::Lt: return x < y;
    case Op::Le: return x <= y;
    case Op::Gt: return x > y;
    case Op::Ge: return x >= y;
    default: return false;
    }
}

Op mirror(Op op)
{
    switch (op) {
    case Op::Lt: return Op::Gt;
    case Op::Le: return Op::Ge;
    case Op::Gt: return Op::Lt;
    case Op::Ge: return Op::Le;
    default: return op;
    }
}

bool compare_values(Op op, const Value& a, const Value& b)
{
    bool a_set = std::holds_alternative<NodeSet>(a);
    bool b_set = std::holds_alternative<NodeSet>(b);

    if (a_set && b_set) {
        for (const auto* x : std::get<NodeSet>(a)) {
            Value xs = x->string_value();
            for (const auto* y : std::get<NodeSet>(b))
                if (compare_atoms(op, xs, Value(y->string_value())))
                    return true;
        }
        return false;
    }
    if (b_set)
        return compare_values(mirror(op), b, a);
    if (a_set) {
        if (std::holds_alternative<bool>(b))
            return compare_atoms(op, to_boolean(a), b);
        for (const auto* x : std::get<NodeSet>(a)) {
            Value xv = std::holds_alternative<double>(b) ? Value(string_to_number(x->string_value()))
                                                         : Value(x->string_value());
            if (compare_atoms(op, xv, b))
                return true;
        }
        return false;
    }
    return compare_atoms(op, a, b);
}

// --------------------------------------------------------------------
// Printing

std::string quote_literal(const std::string& s)
{
    char q = s.find('\'') == std::string::npos ? '\'' : '"';
    return q + s + q;
}

const char* op_text(Op op)
{
    switch (op) {
    case Op::Or: return " or ";
    case Op::And: return " and ";
    case Op::Eq: return " = ";
    case Op::Ne: return " != ";
    case Op::Lt: return " < ";
    case Op::Le: return " <= ";
    case Op::Gt: return " > ";
    case Op::Ge: return " >= ";
    }
    return "";
}

void print(const Expr& e, std::string& out);

void print_step(const Step& step, std::string& out)
{
    switch (step.axis) {
    case Axis::Self: out += '.'; return;
    case Axis::Parent: out += ".."; return;
    case Axis::DescendantOrSelf: return;
    case Axis::Attribute: out += '@'; break;
    case Axis::Child: break;
    }
    switch (step.test) {
    case TestKind::Name: out += step.name; break;
    case TestKind::Any: out += '*'; break;
    case TestKind::Text: out += "text()"; break;
    case TestKind::Node: out += "node()"; break;
    }
    for (const auto& p : step.predicates) {
        out += '[';
        print(*p, out);
        out += ']';
    }
}

void print(const Expr& e, std::string& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Path>) {
                if (n.absolute)
                    out += '/';
                for (std::size_t i = 0; i < n.steps.size(); ++i) {
                    if (i > 0)
                        out += '/';
                    print_step(n.steps[i], out);
                }
            } else if constexpr (std::is_same_v<T, ast::Literal>) {
                out += quote_literal(n.value);
            } else if constexpr (std::is_same_v<T, ast::Number>) {
                out += number_to_string(n.value);
            } else if constexpr (std::is_same_v<T, Call>) {
                out += n.function;
                out += '(';
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i > 0)
                        out += ", ";
                    print(*n.args[i], out);
                }
                out += ')';
            } else {
                auto side = [&](const Expr& sub) {
                    bool wrap = std::holds_alternative<Binary>(sub.node);
                    if (wrap)
                        out += '(';
                    print(sub, out);
                    if (wrap)
                        out += ')';
                };
                side(*n.lhs);
                out += op_text(n.op);
                side(*n.rhs);
            }
        },
        e.node);
}

}  // namespace

// --------------------------------------------------------------------

XPathExpr XPathExpr::parse(std::string_view text)
{
    return XPathExpr(Parser(text).parse());
}

Value XPathExpr::evaluate(const Node& context) const
{
    return eval(*root_, Context{&context, 1, 1});
}

Value XPathExpr::evaluate(const Node& context, std::size_t position, std::size_t size) const
{
    return eval(*root_, Context{&context, position, size});
}

std::string XPathExpr::to_string() const
{
    std::string out;
    print(*root_, out);
    return out;
}

std::string to_string(const Value& v)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NodeSet>)
                return x.empty() ? std::string() : x.front()->string_value();
            else if constexpr (std::is_same_v<T, std::string>)
                return x;
            else if constexpr (std::is_same_v<T, double>)
                return number_to_string(x);
            else
                return x ? "true" : "false";
        },
        v);
}

double to_number(const Value& v)
{
    if (auto d = std::get_if<double>(&v))
        return *d;
    if (auto b = std::get_if<bool>(&v))
        return *b ? 1.0 : 0.0;
    return string_to_number(to_string(v));
}

bool to_boolean(const Value& v)
{
    return std::visit(
        [](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NodeSet>)
                return !x.empty();
            else if constexpr (std::is_same_v<T, std::string>)
                return !x.empty();
            else if constexpr (std::is_same_v<T, double>)
                return x != 0 && !std::isnan(x);
            else
                return x;
        },
        v);
}

double string_to_number(std::string_view s)
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (!s.empty() && is_ws(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_ws(s.back()))
        s.remove_suffix(1);

    bool negative = false;
    if (!s.empty() && s.front() == '-') {
        negative = true;
        s.remove_prefix(1);
    }
    std::size_t digits = 0, dots = 0;
    for (char c : s) {
        if (c == '.')
            ++dots;
        else if (c >= '0' && c <= '9')
            ++digits;
        else
            return nan;
    }
    if (digits == 0 || dots > 1)
        return nan;

    double value = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), value, std::chars_format::fixed);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        return nan;
    return negative ? -value : value;
}

std::string number_to_string(double d)
{
    if (std::isnan(d))
        return "NaN";
    if (std::isinf(d))
        return d > 0 ? "Infinity" : "-Infinity";
    if (d == 0)
        return "0";
    char buf[512];
    auto r = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::fixed);
    return std::string(buf, r.ptr);
}

}  // namespace gridmap::xml
