#pragma once

#include "gridmap/core/time.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridmap {

inline constexpr int kPortalVersion = 1;

/// Type key of resources added by hostname only. The monitor never polls them.
inline constexpr std::string_view kUnconfiguredType = "unconfigured";

struct Location {
    double lat = 0;
    double lon = 0;

    bool operator==(const Location&) const = default;
};

struct Resource {
    std::string id;
    std::string hostname;
    std::optional<int> port;
    std::string type{kUnconfiguredType};
    std::string label;
    std::optional<std::string> endpoint;
    Location location;
    bool enabled = true;

    bool operator==(const Resource&) const = default;
};

enum class ResourceStatus { Up, Down, Unknown };

std::string_view to_string(ResourceStatus status);
ResourceStatus status_from_string(std::string_view text);

/// Latest gathered state of one resource.
struct ResourceInfo {
    std::string resource_id;
    ResourceStatus status = ResourceStatus::Unknown;
    std::string payload_xml;
    Timestamp gathered_at{};
    std::int64_t latency_ms = 0;
    std::optional<std::string> error;

    bool operator==(const ResourceInfo&) const = default;
};

struct MapConfig {
    std::string tile_url_template = "https://tile.openstreetmap.org/{z}/{x}/{y}.png";
    std::optional<std::string> api_key;
    Location center;
    int zoom = 2;
    int width_px = 960;
    int height_px = 540;
    bool allow_pan = true;
    bool allow_zoom = true;

    bool operator==(const MapConfig&) const = default;
};

struct PortalState {
    int version = kPortalVersion;
    MapConfig map;
    std::vector<Resource> resources;

    bool operator==(const PortalState&) const = default;

    const Resource* find(std::string_view id) const;
    Resource* find(std::string_view id);
};

// Validation; each throws ValidationError naming the offending field.
void validate(const Location& location);
void validate(const Resource& resource);
void validate(const MapConfig& map);
void validate(const PortalState& state);

/// Resource ids double as file names in the info store.
bool is_valid_id(std::string_view id);

/// Checks the ResourceInfo invariants: UP needs a well-formed payload, DOWN
/// needs an error message.
void validate(const ResourceInfo& info);

/// 128 random bits as 32 lowercase hex characters.
std::string generate_id();

// JSON mapping. Readers throw ValidationError on missing or mistyped fields.
void to_json(nlohmann::json& j, const Location& v);
void from_json(const nlohmann::json& j, Location& v);
void to_json(nlohmann::json& j, const Resource& v);
void from_json(const nlohmann::json& j, Resource& v);
void to_json(nlohmann::json& j, const MapConfig& v);
void from_json(const nlohmann::json& j, MapConfig& v);
void to_json(nlohmann::json& j, const PortalState& v);
void from_json(const nlohmann::json& j, PortalState& v);

/// The per-resource info document; resource_id is not part of it (it is the
/// file name), so the reader takes it separately.
nlohmann::json info_to_json(const ResourceInfo& info);
ResourceInfo info_from_json(const nlohmann::json& j, std::string resource_id);

}  // namespace gridmap
