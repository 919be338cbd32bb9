#include "gridmap/render/render.hpp"

#include "gridmap/xml/document.hpp"

namespace gridmap {

namespace {

using xml::escape_text;

std::string status_class(ResourceStatus status)
{
    switch (status) {
    case ResourceStatus::Up:
        return "gm-up";
    case ResourceStatus::Down:
        return "gm-down";
    case ResourceStatus::Unknown:
        break;
    }
    return "gm-unknown";
}

std::string trimmed(const std::string& s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

void collect_leaves(const xml::Node& node, const std::string& path, std::string& out)
{
    bool has_element_child = false;
    for (const auto& c : node.children())
        has_element_child |= c->kind() == xml::NodeKind::Element;
    for (const auto& a : node.attributes())
        out += "<dt>" + escape_text(path + "@" + a->name()) + "</dt><dd>" + escape_text(a->value()) + "</dd>";
    if (!has_element_child) {
        auto text = trimmed(node.string_value());
        if (!text.empty() || node.attributes().empty())
            out += "<dt>" + escape_text(path) + "</dt><dd>" + escape_text(text) + "</dd>";
        return;
    }
    for (const auto& c : node.children())
        if (c->kind() == xml::NodeKind::Element)
            collect_leaves(*c, c->name(), out);
}

std::string unknown_popup(const Resource& r)
{
    return "<div class=\"gm-popup gm-unknown\"><h3>" + escape_text(r.label) +
           "</h3><p class=\"gm-status gm-unknown\">UNKNOWN</p><p>No information has been gathered yet.</p></div>";
}

std::string fallback_popup(const Resource& r, const ResourceInfo& info, const std::string& diagnostic = {})
{
    std::string out = "<div class=\"gm-popup gm-fallback\"><h3>" + escape_text(r.label) + "</h3><p class=\"gm-status " +
                      status_class(info.status) + "\">" + std::string(to_string(info.status)) + "</p>";
    if (info.error)
        out += "<p class=\"gm-error\">" + escape_text(*info.error) + "</p>";
    out += "<p class=\"gm-time\">Gathered " + format_timestamp(info.gathered_at) + "</p>";
    if (!diagnostic.empty())
        out += "<p class=\"gm-render-error\">" + escape_text(diagnostic) + "</p>";
    if (!info.payload_xml.empty()) {
        try {
            auto doc = xml::parse_xml(info.payload_xml);
            std::string items;
            collect_leaves(doc.document_element(), doc.document_element().name(), items);
            out += "<dl>" + items + "</dl>";
        } catch (const xml::ParseError&) {
        }
    }
    return out + "</div>";
}

std::string fallback_row(const Resource& r, const std::optional<ResourceInfo>& info, const std::string& diagnostic = {})
{
    auto status = info ? info->status : ResourceStatus::Unknown;
    std::string status_text(to_string(status));
    if (info && info->error)
        status_text += ": " + *info->error;
    if (!diagnostic.empty())
        status_text += " (" + diagnostic + ")";
    return "<td class=\"gm-label\">" + escape_text(r.label) + "</td><td class=\"gm-type\">" + escape_text(r.type) +
           "</td><td class=\"gm-status " + status_class(status) + "\">" + escape_text(status_text) +
           "</td><td class=\"gm-time\">" + (info ? format_timestamp(info->gathered_at) : std::string("never")) +
           "</td>";
}

bool is_fragment(const std::string& html)
{
    return xml::is_well_formed("<div>" + html + "</div>");
}

}  // namespace

bool is_td_sequence(std::string_view html)
{
    try {
        auto doc = xml::parse_xml("<tr>" + std::string(html) + "</tr>");
        bool any = false;
        for (const auto& c : doc.document_element().children()) {
            if (c->kind() == xml::NodeKind::Text) {
                if (!trimmed(c->value()).empty())
                    return false;
                continue;
            }
            if (c->name() != "td")
                return false;
            any = true;
        }
        return any;
    } catch (const xml::ParseError&) {
        return false;
    }
}

std::string render_popup(const Resource& resource, const std::optional<ResourceInfo>& info,
                         const GathererRegistry& registry)
{
    try {
        if (!info)
            return unknown_popup(resource);
        const auto* styles = registry.stylesheets(resource.type);
        if (!styles || info->status != ResourceStatus::Up)
            return fallback_popup(resource, *info);
        std::string html;
        try {
            html = styles->popup.apply(xml::parse_xml(info->payload_xml));
        } catch (const std::exception& e) {
            return fallback_popup(resource, *info, std::string("popup stylesheet failed: ") + e.what());
        }
        if (trimmed(html).empty())
            return fallback_popup(resource, *info, "popup stylesheet produced no output");
        if (!is_fragment(html))
            return fallback_popup(resource, *info, "popup stylesheet produced malformed output");
        return html;
    } catch (...) {
        return "<div class=\"gm-popup gm-fallback\"><p class=\"gm-render-error\">rendering failed</p></div>";
    }
}

std::string render_list_row(const Resource& resource, const std::optional<ResourceInfo>& info,
                            const GathererRegistry& registry)
{
    try {
        if (!info)
            return fallback_row(resource, info);
        const auto* styles = registry.stylesheets(resource.type);
        if (!styles || info->status != ResourceStatus::Up)
            return fallback_row(resource, info);
        std::string html;
        try {
            html = styles->list.apply(xml::parse_xml(info->payload_xml));
        } catch (const std::exception& e) {
            return fallback_row(resource, info, std::string("list stylesheet failed: ") + e.what());
        }
        if (!is_td_sequence(html))
            return fallback_row(resource, info, "list stylesheet output is not a sequence of td elements");
        return html;
    } catch (...) {
        return "<td>rendering failed</td><td></td><td>UNKNOWN</td><td></td>";
    }
}

bool is_stale(const std::optional<ResourceInfo>& info, std::chrono::seconds interval, Timestamp at)
{
    return info && at - info->gathered_at > 3 * interval;
}

RenderedResource render_resource(const Resource& resource, const std::optional<ResourceInfo>& info,
                                 const GathererRegistry& registry, std::chrono::seconds interval, Timestamp at)
{
    return {resource.id, render_popup(resource, info, registry), render_list_row(resource, info, registry),
            info ? info->status : ResourceStatus::Unknown, is_stale(info, interval, at)};
}

}  // namespace gridmap
