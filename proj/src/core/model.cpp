#include "gridmap/core/model.hpp"

#include "gridmap/core/errors.hpp"
#include "gridmap/xml/document.hpp"

#include <cmath>
#include <random>

namespace gridmap {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what)
{
    throw ValidationError(what);
}

const json& field(const json& j, const char* name)
{
    if (!j.is_object())
        invalid("expected a JSON object");
    auto it = j.find(name);
    if (it == j.end())
        invalid(std::string("missing field '") + name + "'");
    return *it;
}

std::string get_string(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_string())
        invalid(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

double get_number(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_number())
        invalid(std::string("field '") + name + "' must be a number");
    return v.get<double>();
}

int get_int(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_number_integer())
        invalid(std::string("field '") + name + "' must be an integer");
    return v.get<int>();
}

bool get_bool(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_boolean())
        invalid(std::string("field '") + name + "' must be a boolean");
    return v.get<bool>();
}

std::optional<std::string> get_optional_string(const json& j, const char* name)
{
    auto it = j.find(name);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        invalid(std::string("field '") + name + "' must be a string or null");
    return it->get<std::string>();
}

json optional_json(const std::optional<std::string>& v)
{
    return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string_view to_string(ResourceStatus status)
{
    switch (status) {
    case ResourceStatus::Up: return "UP";
    case ResourceStatus::Down: return "DOWN";
    case ResourceStatus::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

ResourceStatus status_from_string(std::string_view text)
{
    if (text == "UP")
        return ResourceStatus::Up;
    if (text == "DOWN")
        return ResourceStatus::Down;
    if (text == "UNKNOWN")
        return ResourceStatus::Unknown;
    invalid("unknown status '" + std::string(text) + "'");
}

const Resource* PortalState::find(std::string_view id) const
{
    for (const auto& r : resources)
        if (r.id == id)
            return &r;
    return nullptr;
}

Resource* PortalState::find(std::string_view id)
{
    for (auto& r : resources)
        if (r.id == id)
            return &r;
    return nullptr;
}

// --------------------------------------------------------------------

void validate(const Location& location)
{
    if (!(location.lat >= -90 && location.lat <= 90))
        invalid("lat must be within [-90, 90]");
    if (!(location.lon >= -180 && location.lon <= 180))
        invalid("lon must be within [-180, 180]");
}

bool is_valid_id(std::string_view id)
{
    if (id.empty() || id.size() > 64)
        return false;
    for (char c : id)
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_'))
            return false;
    return true;
}

void validate(const Resource& r)
{
    if (!is_valid_id(r.id))
        invalid("resource id '" + r.id + "' must be 1-64 characters of [A-Za-z0-9_-]");
    if (r.hostname.find_first_not_of(" \t\r\n") == std::string::npos)
        invalid("hostname must not be empty");
    if (r.port && (*r.port < 1 || *r.port > 65535))
        invalid("port must be within [1, 65535]");
    if (r.type.empty())
        invalid("type must not be empty");
    if (r.endpoint && r.endpoint->empty())
        invalid("endpoint must not be empty when present");
    validate(r.location);
}

void validate(const MapConfig& m)
{
    if (m.tile_url_template.empty())
        invalid("tile_url_template must not be empty");
    if (m.zoom < 0 || m.zoom > 19)
        invalid("zoom must be within [0, 19]");
    if (m.width_px <= 0 || m.height_px <= 0)
        invalid("map dimensions must be positive");
    validate(m.center);
}

void validate(const PortalState& state)
{
    if (state.version != kPortalVersion)
        invalid("unsupported version " + std::to_string(state.version));
    validate(state.map);
    for (std::size_t i = 0; i < state.resources.size(); ++i) {
        validate(state.resources[i]);
        for (std::size_t k = 0; k < i; ++k)
            if (state.resources[k].id == state.resources[i].id)
                invalid("duplicate resource id '" + state.resources[i].id + "'");
    }
}

void validate(const ResourceInfo& info)
{
    if (info.latency_ms < 0)
        invalid("latency_ms must not be negative");
    if (info.status == ResourceStatus::Up && !xml::is_well_formed(info.payload_xml))
        invalid("UP info requires a well-formed XML payload");
    if (info.status == ResourceStatus::Down && (!info.error || info.error->empty()))
        invalid("DOWN info requires an error message");
}

std::string generate_id()
{
    thread_local std::mt19937_64 rng{[] {
        std::random_device rd;
        std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
        return std::mt19937_64(seq);
    }()};
    static constexpr char kHex[] = "0123456789abcdef";
    std::string id;
    for (int word = 0; word < 2; ++word) {
        auto bits = rng();
        for (int i = 0; i < 16; ++i) {
            id += kHex[bits & 0xF];
            bits >>= 4;
        }
    }
    return id;
}

// --------------------------------------------------------------------

void to_json(json& j, const Location& v)
{
    j = json{{"lat", v.lat}, {"lon", v.lon}};
}

void from_json(const json& j, Location& v)
{
    v.lat = get_number(j, "lat");
    v.lon = get_number(j, "lon");
}

void to_json(json& j, const Resource& v)
{
    j = json{{"id", v.id},
             {"hostname", v.hostname},
             {"port", v.port ? json(*v.port) : json(nullptr)},
             {"type", v.type},
             {"label", v.label},
             {"endpoint", optional_json(v.endpoint)},
             {"location", v.location},
             {"enabled", v.enabled}};
}

void from_json(const json& j, Resource& v)
{
    v.id = get_string(j, "id");
    v.hostname = get_string(j, "hostname");
    auto port = j.find("port");
    if (port == j.end() || port->is_null())
        v.port.reset();
    else if (port->is_number_integer())
        v.port = port->get<int>();
    else
        invalid("field 'port' must be an integer or null");
    v.type = get_string(j, "type");
    v.label = get_string(j, "label");
    v.endpoint = get_optional_string(j, "endpoint");
    from_json(field(j, "location"), v.location);
    v.enabled = get_bool(j, "enabled");
}

void to_json(json& j, const MapConfig& v)
{
    j = json{{"tile_url_template", v.tile_url_template},
             {"api_key", optional_json(v.api_key)},
             {"center", v.center},
             {"zoom", v.zoom},
             {"width_px", v.width_px},
             {"height_px", v.height_px},
             {"allow_pan", v.allow_pan},
             {"allow_zoom", v.allow_zoom}};
}

void from_json(const json& j, MapConfig& v)
{
    v.tile_url_template = get_string(j, "tile_url_template");
    v.api_key = get_optional_string(j, "api_key");
    from_json(field(j, "center"), v.center);
    v.zoom = get_int(j, "zoom");
    v.width_px = get_int(j, "width_px");
    v.height_px = get_int(j, "height_px");
    v.allow_pan = get_bool(j, "allow_pan");
    v.allow_zoom = get_bool(j, "allow_zoom");
}

void to_json(json& j, const PortalState& v)
{
    j = json{{"version", v.version}, {"map", v.map}, {"resources", v.resources}};
}

void from_json(const json& j, PortalState& v)
{
    v.version = get_int(j, "version");
    if (v.version != kPortalVersion)
        throw VersionError("unsupported portal.json version " + std::to_string(v.version) + " (expected " +
                           std::to_string(kPortalVersion) + ")");
    from_json(field(j, "map"), v.map);
    const auto& resources = field(j, "resources");
    if (!resources.is_array())
        invalid("field 'resources' must be an array");
    v.resources.clear();
    for (const auto& r : resources) {
        Resource res;
        from_json(r, res);
        v.resources.push_back(std::move(res));
    }
}

json info_to_json(const ResourceInfo& info)
{
    return json{{"status", to_string(info.status)},
                {"gathered_at", format_timestamp(info.gathered_at)},
                {"latency_ms", info.latency_ms},
                {"error", optional_json(info.error)},
                {"payload_xml", info.payload_xml}};
}

ResourceInfo info_from_json(const json& j, std::string resource_id)
{
    ResourceInfo info;
    info.resource_id = std::move(resource_id);
    info.status = status_from_string(get_string(j, "status"));
    info.gathered_at = parse_timestamp(get_string(j, "gathered_at"));
    const auto& latency = field(j, "latency_ms");
    if (!latency.is_number_integer())
        invalid("field 'latency_ms' must be an integer");
    info.latency_ms = latency.get<std::int64_t>();
    info.error = get_optional_string(j, "error");
    info.payload_xml = get_string(j, "payload_xml");
    return info;
}

}  // namespace gridmap
