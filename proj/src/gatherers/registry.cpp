#include "gridmap/gatherers/builtin.hpp"
#include "gridmap/gatherers/gatherer.hpp"

#include <fstream>

namespace gridmap {

namespace fs = std::filesystem;
using nlohmann::json;

ResourceInfo up_info(const Resource& resource, std::string payload_xml, std::int64_t latency_ms)
{
    ResourceInfo info;
    info.resource_id = resource.id;
    info.status = ResourceStatus::Up;
    info.payload_xml = std::move(payload_xml);
    info.gathered_at = now();
    info.latency_ms = latency_ms;
    return info;
}

ResourceInfo down_info(const Resource& resource, std::string error, std::int64_t latency_ms)
{
    ResourceInfo info;
    info.resource_id = resource.id;
    info.status = ResourceStatus::Down;
    info.gathered_at = now();
    info.latency_ms = latency_ms;
    info.error = std::move(error);
    return info;
}

StylesheetPair load_stylesheet_pair(const fs::path& dir)
{
    auto load = [&](const char* file) {
        auto path = dir / file;
        if (!fs::exists(path))
            throw xml::StylesheetError(path.string() + ": file not found");
        try {
            return xml::Stylesheet::load(path);
        } catch (const std::exception& e) {
            throw xml::StylesheetError(path.string() + ": " + e.what());
        }
    };
    auto popup = load("popup.xsl");
    auto list = load("list.xsl");
    return {std::move(popup), std::move(list)};
}

GathererRegistry::Entry& GathererRegistry::insert(std::string type, std::shared_ptr<const Gatherer> gatherer)
{
    if (type.empty())
        throw RegistrationError("gatherer type key must not be empty");
    if (type == kUnconfiguredType)
        throw RegistrationError("type key '" + type + "' is reserved");
    if (!gatherer)
        throw RegistrationError("no gatherer given for type '" + type + "'");
    if (entries_.count(type))
        throw RegistrationError("type '" + type + "' is already registered");
    auto& entry = entries_[std::move(type)];
    entry.gatherer = std::move(gatherer);
    return entry;
}

void GathererRegistry::add(std::string type, std::shared_ptr<const Gatherer> gatherer,
                           std::optional<fs::path> styles_dir)
{
    std::string key = type;
    auto& entry = insert(std::move(type), std::move(gatherer));
    if (!styles_dir)
        return;
    try {
        entry.styles = load_stylesheet_pair(*styles_dir);
    } catch (const xml::StylesheetError& e) {
        warnings_.push_back("type '" + key + "': stylesheets unavailable, using fallback rendering: " + e.what());
    }
}

void GathererRegistry::add(std::string type, std::shared_ptr<const Gatherer> gatherer, StylesheetPair styles)
{
    insert(std::move(type), std::move(gatherer)).styles = std::move(styles);
}

const Gatherer* GathererRegistry::lookup(std::string_view type) const
{
    auto it = entries_.find(type);
    return it == entries_.end() ? nullptr : it->second.gatherer.get();
}

const StylesheetPair* GathererRegistry::stylesheets(std::string_view type) const
{
    auto it = entries_.find(type);
    if (it == entries_.end() || !it->second.styles)
        return nullptr;
    return &*it->second.styles;
}

std::vector<std::string> GathererRegistry::types() const
{
    std::vector<std::string> out;
    for (const auto& [key, entry] : entries_)
        out.push_back(key);
    return out;
}

std::shared_ptr<const Gatherer> builtin_gatherer(std::string_view name)
{
    if (name == "tcp-probe")
        return std::make_shared<TcpProbeGatherer>();
    if (name == "http-xml")
        return std::make_shared<HttpXmlGatherer>();
    return nullptr;
}

GathererRegistry load_registry(const fs::path& config)
{
    std::ifstream in(config);
    if (!in)
        throw RegistrationError("cannot open " + config.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw RegistrationError(config.string() + " is not valid JSON: " + e.what());
    }
    if (!j.is_array())
        throw RegistrationError(config.string() + ": expected an array of gatherer entries");

    GathererRegistry registry;
    auto base = config.parent_path();
    for (const auto& entry : j) {
        if (!entry.is_object() || !entry.contains("type") || !entry["type"].is_string())
            throw RegistrationError(config.string() + ": every entry needs a string \"type\"");
        auto type = entry["type"].get<std::string>();
        auto kind = entry.value("gatherer", type);
        auto gatherer = builtin_gatherer(kind);
        if (!gatherer)
            throw RegistrationError(config.string() + ": unknown gatherer '" + kind + "' for type '" + type + "'");
        std::optional<fs::path> styles;
        if (entry.contains("styles"))
            styles = base / entry["styles"].get<std::string>();
        registry.add(type, std::move(gatherer), styles);
    }
    return registry;
}

}  // namespace gridmap
