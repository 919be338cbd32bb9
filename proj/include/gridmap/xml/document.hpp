#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridmap::xml {

enum class NodeKind { Root, Element, Attribute, Text };

/// A node of a parsed document. Nodes are owned by their Document and never
/// change after parsing, so raw pointers into the tree stay valid for the
/// document's lifetime.
class Node {
public:
    NodeKind kind() const noexcept { return kind_; }

    /// Element or attribute name; empty for root and text nodes.
    const std::string& name() const noexcept { return name_; }

    /// Attribute value or text content; empty for root and element nodes.
    const std::string& value() const noexcept { return value_; }

    const Node* parent() const noexcept { return parent_; }

    /// Element and text children in document order.
    const std::vector<std::unique_ptr<Node>>& children() const noexcept { return children_; }

    /// Attribute nodes in source order.
    const std::vector<std::unique_ptr<Node>>& attributes() const noexcept { return attributes_; }

    /// Position in document order; root is 0 and attributes precede children.
    std::size_t order() const noexcept { return order_; }

    const Node* attribute(std::string_view name) const noexcept;

    /// XPath string-value: text/attribute value, or all descendant text.
    std::string string_value() const;

    const Node* document_element() const noexcept;

private:
    friend class Document;
    friend class Parser;

    NodeKind kind_ = NodeKind::Root;
    std::string name_;
    std::string value_;
    Node* parent_ = nullptr;
    std::vector<std::unique_ptr<Node>> children_;
    std::vector<std::unique_ptr<Node>> attributes_;
    std::size_t order_ = 0;
};

class Document {
public:
    Document();
    Document(Document&&) noexcept = default;
    Document& operator=(Document&&) noexcept = default;
    Document(const Document&) = delete;
    Document& operator=(const Document&) = delete;

    const Node& root() const noexcept { return *root_; }
    const Node& document_element() const noexcept { return *root_->document_element(); }

private:
    friend class Parser;
    std::unique_ptr<Node> root_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Parses a complete XML document. Comments, processing instructions and the
/// XML declaration are dropped; DOCTYPE declarations are rejected. Only the
/// five predefined entities and numeric character references are recognised.
Document parse_xml(std::string_view text);

/// Serializes the document element (no XML declaration).
std::string serialize(const Document& doc);
std::string serialize(const Node& node);

std::string escape_text(std::string_view text);
std::string escape_attribute(std::string_view text);

/// All text nodes under `node` in document order, joined by single spaces.
std::string joined_text(const Node& node);

bool is_well_formed(std::string_view text);

}  // namespace gridmap::xml
