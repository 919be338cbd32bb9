#pragma once

#include "gridmap/core/model.hpp"
#include "gridmap/core/store.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gridmap {

/// Fields to change on a resource; unset members are left alone. Nested
/// optionals distinguish "leave" from "clear" for nullable fields.
struct ResourcePatch {
    std::optional<std::string> hostname;
    std::optional<std::optional<int>> port;
    std::optional<std::string> type;
    std::optional<std::string> label;
    std::optional<std::optional<std::string>> endpoint;
    std::optional<double> lat;
    std::optional<double> lon;
    std::optional<bool> enabled;

    bool empty() const;
};

/// Accepts {"hostname", "port", "type", "label", "endpoint", "enabled",
/// "location": {"lat"?, "lon"?}}. Unknown keys and "id" are rejected.
ResourcePatch patch_from_json(const nlohmann::json& j);

/// Parses CLI assignments such as "lat=-37.8" or "port=" (clears the port).
ResourcePatch patch_from_assignments(const std::vector<std::string>& assignments);

/// Appends a fresh unconfigured resource labelled with the trimmed hostname.
std::pair<PortalState, Resource> add_resource(PortalState state, std::string_view hostname);

PortalState update_resource(PortalState state, std::string_view id, const ResourcePatch& patch);

/// Removes the resource and its recorded info.
PortalState delete_resource(PortalState state, std::string_view id, Store& info_store);

/// Case-insensitive substring match against hostname, label, type and the
/// text content of the latest payload. Empty keyword matches everything.
/// Ids come back in state order.
std::vector<std::string> search(std::string_view keyword, const PortalState& state,
                                const std::map<std::string, ResourceInfo>& infos);

}  // namespace gridmap
