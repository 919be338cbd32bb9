#pragma once

#include "gridmap/core/model.hpp"
#include "gridmap/gatherers/gatherer.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace gridmap {

struct RenderedResource {
    std::string resource_id;
    std::string popup_html;
    std::string list_row_html;
    ResourceStatus status = ResourceStatus::Unknown;
    bool stale = false;
};

/// The type's popup stylesheet applied to the payload when the info is UP;
/// otherwise a generic fragment with status, error, timestamp and a
/// definition list of the payload's leaf values. Never throws, never empty.
std::string render_popup(const Resource& resource, const std::optional<ResourceInfo>& info,
                         const GathererRegistry& registry);

/// As render_popup with the list stylesheet. The result is always a
/// sequence of <td> elements; the fallback has four cells: label, type,
/// status (with error) and gathered_at.
std::string render_list_row(const Resource& resource, const std::optional<ResourceInfo>& info,
                            const GathererRegistry& registry);

/// gathered_at older than 3 x interval. A resource never polled is not stale.
bool is_stale(const std::optional<ResourceInfo>& info, std::chrono::seconds interval, Timestamp at);

RenderedResource render_resource(const Resource& resource, const std::optional<ResourceInfo>& info,
                                 const GathererRegistry& registry, std::chrono::seconds interval, Timestamp at);

/// True if `html` parses as one or more <td> elements with only whitespace
/// between them.
bool is_td_sequence(std::string_view html);

}  // namespace gridmap
