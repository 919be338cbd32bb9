#pragma once

#include "gridmap/xml/document.hpp"
#include "gridmap/xml/xpath.hpp"

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gridmap::xml {

/// Raised when a stylesheet uses markup or expressions outside the supported
/// subset. The message names the offending instruction.
class StylesheetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised while applying a stylesheet (recursion guard).
class TransformError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxTemplateDepth = 256;

struct CompiledStylesheet;

/// A compiled stylesheet in the supported XSLT 1.0 subset:
///
///   xsl:stylesheet / xsl:transform    root, xmlns:xsl must be the XSLT namespace
///   xsl:output                        accepted and ignored (output is always HTML)
///   xsl:template match=               location-path patterns
///   xsl:apply-templates select?       defaults to child nodes
///   xsl:value-of select=
///   xsl:for-each select=
///   xsl:if test=
///   xsl:choose / xsl:when / xsl:otherwise
///   xsl:text
///   literal result elements with {expr} attribute value templates
///
/// Template conflicts use the XSLT default priorities (name tests 0, wildcard
/// and text() -0.5, anything longer 0.5); the later template wins a tie.
/// Immutable and safe to apply from several threads.
class Stylesheet {
public:
    static Stylesheet parse(std::string_view text);
    static Stylesheet load(const std::filesystem::path& path);

    std::string apply(const Document& doc) const;
    std::string apply(const Node& node) const;

    std::size_t template_count() const;

private:
    explicit Stylesheet(std::shared_ptr<const CompiledStylesheet> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const CompiledStylesheet> impl_;
};

/// Output is an HTML fragment: text is escaped (&, <, >), attribute values
/// additionally escape '"'; void elements are written as <br/>.
inline std::string apply_stylesheet(const Document& doc, const Stylesheet& sheet)
{
    return sheet.apply(doc);
}

}  // namespace gridmap::xml
