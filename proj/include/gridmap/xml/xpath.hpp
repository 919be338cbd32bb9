#pragma once

#include "gridmap/xml/document.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gridmap::xml {

/// Node-sets are kept in document order without duplicates.
using NodeSet = std::vector<const Node*>;

using Value = std::variant<NodeSet, std::string, double, bool>;

class XPathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace ast {

enum class Axis { Child, Attribute, Self, Parent, DescendantOrSelf };

enum class TestKind { Name, Any, Text, Node };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Step {
    Axis axis = Axis::Child;
    TestKind test = TestKind::Name;
    std::string name;
    std::vector<ExprPtr> predicates;
};

struct Path {
    bool absolute = false;
    std::vector<Step> steps;
};

struct Literal {
    std::string value;
};

struct Number {
    double value = 0;
};

struct Call {
    std::string function;
    std::vector<ExprPtr> args;
};

enum class Op { Or, And, Eq, Ne, Lt, Le, Gt, Ge };

struct Binary {
    Op op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct Expr {
    std::variant<Path, Literal, Number, Call, Binary> node;
};

/// Whether the expression statically yields a node-set.
bool returns_node_set(const Expr& expr);

}  // namespace ast

/// A compiled expression from the supported XPath subset: location paths over
/// the child and attribute axes with "//", "*", ".", "..", text() and
/// predicates; literals and numbers; comparison and boolean operators; and the
/// functions count, not, name, string, number, concat, position and last.
class XPathExpr {
public:
    /// Throws XPathError for anything outside the supported grammar.
    static XPathExpr parse(std::string_view text);

    Value evaluate(const Node& context) const;
    Value evaluate(const Node& context, std::size_t position, std::size_t size) const;

    std::string to_string() const;

    const ast::Expr& root() const noexcept { return *root_; }

    bool returns_node_set() const { return ast::returns_node_set(*root_); }

private:
    explicit XPathExpr(ast::ExprPtr root) : root_(std::move(root)) {}
    ast::ExprPtr root_;
};

// Type conversions with XPath 1.0 semantics.
std::string to_string(const Value& v);
double to_number(const Value& v);
bool to_boolean(const Value& v);
double string_to_number(std::string_view s);
std::string number_to_string(double d);

}  // namespace gridmap::xml
