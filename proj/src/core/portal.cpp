#include "gridmap/core/portal.hpp"

#include "gridmap/core/errors.hpp"
#include "gridmap/xml/document.hpp"

#include <algorithm>
#include <charconv>

namespace gridmap {

using nlohmann::json;

namespace {

std::string trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double parse_double(const std::string& key, const std::string& value)
{
    double d = 0;
    auto r = std::from_chars(value.data(), value.data() + value.size(), d);
    if (r.ec != std::errc() || r.ptr != value.data() + value.size())
        throw ValidationError(key + " must be a number, got '" + value + "'");
    return d;
}

int parse_int(const std::string& key, const std::string& value)
{
    int i = 0;
    auto r = std::from_chars(value.data(), value.data() + value.size(), i);
    if (r.ec != std::errc() || r.ptr != value.data() + value.size())
        throw ValidationError(key + " must be an integer, got '" + value + "'");
    return i;
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw ValidationError(key + " must be true or false, got '" + value + "'");
}

}  // namespace

bool ResourcePatch::empty() const
{
    return !hostname && !port && !type && !label && !endpoint && !lat && !lon && !enabled;
}

ResourcePatch patch_from_json(const json& j)
{
    if (!j.is_object())
        throw ValidationError("patch must be a JSON object");
    ResourcePatch p;
    auto str = [](const json& v, const std::string& key) {
        if (!v.is_string())
            throw ValidationError("field '" + key + "' must be a string");
        return v.get<std::string>();
    };
    auto num = [](const json& v, const std::string& key) {
        if (!v.is_number())
            throw ValidationError("field '" + key + "' must be a number");
        return v.get<double>();
    };
    for (const auto& [key, v] : j.items()) {
        if (key == "hostname") {
            p.hostname = str(v, key);
        } else if (key == "port") {
            if (v.is_null())
                p.port = std::optional<int>{};
            else if (v.is_number_integer())
                p.port = v.get<int>();
            else
                throw ValidationError("field 'port' must be an integer or null");
        } else if (key == "type") {
            p.type = str(v, key);
        } else if (key == "label") {
            p.label = str(v, key);
        } else if (key == "endpoint") {
            p.endpoint = v.is_null() ? std::optional<std::string>{} : std::optional<std::string>{str(v, key)};
        } else if (key == "enabled") {
            if (!v.is_boolean())
                throw ValidationError("field 'enabled' must be a boolean");
            p.enabled = v.get<bool>();
        } else if (key == "location") {
            if (!v.is_object())
                throw ValidationError("field 'location' must be an object");
            for (const auto& [k, c] : v.items()) {
                if (k == "lat")
                    p.lat = num(c, "lat");
                else if (k == "lon")
                    p.lon = num(c, "lon");
                else
                    throw ValidationError("unknown location field '" + k + "'");
            }
        } else if (key == "lat") {
            p.lat = num(v, key);
        } else if (key == "lon") {
            p.lon = num(v, key);
        } else if (key == "id") {
            throw ValidationError("resource id is immutable");
        } else {
            throw ValidationError("unknown field '" + key + "'");
        }
    }
    return p;
}

ResourcePatch patch_from_assignments(const std::vector<std::string>& assignments)
{
    ResourcePatch p;
    for (const auto& a : assignments) {
        auto eq = a.find('=');
        if (eq == std::string::npos)
            throw ValidationError("expected key=value, got '" + a + "'");
        auto key = a.substr(0, eq);
        auto value = a.substr(eq + 1);
        if (key == "hostname")
            p.hostname = value;
        else if (key == "port")
            p.port = value.empty() ? std::optional<int>{} : std::optional<int>{parse_int(key, value)};
        else if (key == "type")
            p.type = value;
        else if (key == "label")
            p.label = value;
        else if (key == "endpoint")
            p.endpoint = value.empty() ? std::optional<std::string>{} : std::optional<std::string>{value};
        else if (key == "lat")
            p.lat = parse_double(key, value);
        else if (key == "lon")
            p.lon = parse_double(key, value);
        else if (key == "enabled")
            p.enabled = parse_bool(key, value);
        else if (key == "id")
            throw ValidationError("resource id is immutable");
        else
            throw ValidationError("unknown field '" + key + "'");
    }
    return p;
}

std::pair<PortalState, Resource> add_resource(PortalState state, std::string_view hostname)
{
    auto host = trim(hostname);
    if (host.empty())
        throw ValidationError("hostname must not be empty");

    Resource r;
    do {
        r.id = generate_id();
    } while (state.find(r.id));
    r.hostname = host;
    r.label = host;
    r.type = std::string(kUnconfiguredType);
    r.enabled = true;
    state.resources.push_back(r);
    return {std::move(state), std::move(r)};
}

PortalState update_resource(PortalState state, std::string_view id, const ResourcePatch& patch)
{
    auto* r = state.find(id);
    if (!r)
        throw NotFoundError("no resource with id '" + std::string(id) + "'");

    Resource updated = *r;
    if (patch.hostname)
        updated.hostname = trim(*patch.hostname);
    if (patch.port)
        updated.port = *patch.port;
    if (patch.type)
        updated.type = trim(*patch.type);
    if (patch.label)
        updated.label = *patch.label;
    if (patch.endpoint)
        updated.endpoint = *patch.endpoint;
    if (patch.lat)
        updated.location.lat = *patch.lat;
    if (patch.lon)
        updated.location.lon = *patch.lon;
    if (patch.enabled)
        updated.enabled = *patch.enabled;
    validate(updated);
    *r = std::move(updated);
    return state;
}

PortalState delete_resource(PortalState state, std::string_view id, Store& info_store)
{
    auto it = std::find_if(state.resources.begin(), state.resources.end(), [&](const Resource& r) { return r.id == id; });
    if (it == state.resources.end())
        throw NotFoundError("no resource with id '" + std::string(id) + "'");
    state.resources.erase(it);
    info_store.delete_info(id);
    return state;
}

std::vector<std::string> search(std::string_view keyword, const PortalState& state,
                                const std::map<std::string, ResourceInfo>& infos)
{
    auto needle = lower(keyword);
    std::vector<std::string> ids;
    for (const auto& r : state.resources) {
        bool hit = needle.empty() || lower(r.hostname).find(needle) != std::string::npos ||
                   lower(r.label).find(needle) != std::string::npos || lower(r.type).find(needle) != std::string::npos;
        if (!hit) {
            auto it = infos.find(r.id);
            if (it != infos.end() && !it->second.payload_xml.empty()) {
                try {
                    auto doc = xml::parse_xml(it->second.payload_xml);
                    hit = lower(xml::joined_text(doc.root())).find(needle) != std::string::npos;
                } catch (const xml::ParseError&) {
                }
            }
        }
        if (hit)
            ids.push_back(r.id);
    }
    return ids;
}

}  // namespace gridmap
