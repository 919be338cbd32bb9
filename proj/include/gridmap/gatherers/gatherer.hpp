#pragma once

#include "gridmap/core/errors.hpp"
#include "gridmap/core/model.hpp"
#include "gridmap/xml/xslt.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridmap {

/// Queries one class of information service. gather() must not throw: every
/// failure comes back as a DOWN info with an error. Instances are shared
/// across worker threads.
class Gatherer {
public:
    virtual ~Gatherer() = default;
    virtual ResourceInfo gather(const Resource& resource, std::chrono::milliseconds timeout) const = 0;
};

ResourceInfo up_info(const Resource& resource, std::string payload_xml, std::int64_t latency_ms);
ResourceInfo down_info(const Resource& resource, std::string error, std::int64_t latency_ms = 0);

struct StylesheetPair {
    xml::Stylesheet popup;
    xml::Stylesheet list;
};

/// Loads DIR/popup.xsl and DIR/list.xsl. Throws xml::StylesheetError naming
/// the file if either is missing or invalid.
StylesheetPair load_stylesheet_pair(const std::filesystem::path& dir);

class RegistrationError : public Error {
public:
    using Error::Error;
};

class GathererRegistry {
public:
    /// Throws RegistrationError for a duplicate or reserved key. A styles
    /// directory that fails to load is kept as a warning; the type still
    /// gathers and renders through the fallback.
    void add(std::string type, std::shared_ptr<const Gatherer> gatherer,
             std::optional<std::filesystem::path> styles_dir = std::nullopt);
    void add(std::string type, std::shared_ptr<const Gatherer> gatherer, StylesheetPair styles);

    /// nullptr when the key is not registered.
    const Gatherer* lookup(std::string_view type) const;
    const StylesheetPair* stylesheets(std::string_view type) const;

    std::vector<std::string> types() const;
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    struct Entry {
        std::shared_ptr<const Gatherer> gatherer;
        std::optional<StylesheetPair> styles;
    };

    Entry& insert(std::string type, std::shared_ptr<const Gatherer> gatherer);

    std::map<std::string, Entry, std::less<>> entries_;
    std::vector<std::string> warnings_;
};

/// "tcp-probe" or "http-xml"; nullptr otherwise.
std::shared_ptr<const Gatherer> builtin_gatherer(std::string_view name);

/// Reads gatherers.json:
///
///   [{"type": "cluster", "gatherer": "http-xml", "styles": "styles/cluster"}, ...]
///
/// "gatherer" defaults to "type"; "styles" is optional and resolved against
/// the file's directory.
GathererRegistry load_registry(const std::filesystem::path& config);

}  // namespace gridmap
