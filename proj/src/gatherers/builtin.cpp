#include "gridmap/gatherers/builtin.hpp"

#include "gridmap/gatherers/net.hpp"
#include "gridmap/xml/document.hpp"

namespace gridmap {

namespace {

std::int64_t elapsed_ms(net::Clock::time_point start)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(net::Clock::now() - start).count();
}

std::string describe(const net::NetError& e, std::chrono::milliseconds timeout)
{
    switch (e.kind()) {
    case net::NetError::Kind::Timeout:
        return "timeout: no response within " + std::to_string(timeout.count()) + " ms (" + e.what() + ")";
    case net::NetError::Kind::Connect:
        return std::string("connection failed: ") + e.what();
    case net::NetError::Kind::Protocol:
        break;
    }
    return std::string("protocol error: ") + e.what();
}

}  // namespace

ResourceInfo TcpProbeGatherer::gather(const Resource& resource, std::chrono::milliseconds timeout) const
{
    if (!resource.port)
        return down_info(resource, "port required");
    auto start = net::Clock::now();
    try {
        net::connect_tcp(resource.hostname, *resource.port, start + timeout);
        auto latency = elapsed_ms(start);
        std::string payload = "<tcp-probe><host>" + xml::escape_text(resource.hostname) + "</host><port>" +
                              std::to_string(*resource.port) + "</port><latency-ms>" + std::to_string(latency) +
                              "</latency-ms></tcp-probe>";
        return up_info(resource, std::move(payload), latency);
    } catch (const net::NetError& e) {
        return down_info(resource, describe(e, timeout), elapsed_ms(start));
    } catch (const std::exception& e) {
        return down_info(resource, std::string("probe failed: ") + e.what(), elapsed_ms(start));
    }
}

ResourceInfo HttpXmlGatherer::gather(const Resource& resource, std::chrono::milliseconds timeout) const
{
    if (!resource.endpoint)
        return down_info(resource, "endpoint required");
    auto start = net::Clock::now();
    try {
        auto url = net::parse_http_url(*resource.endpoint);
        auto response = net::http_get(url, start + timeout);
        auto latency = elapsed_ms(start);
        if (response.status != 200)
            return down_info(resource, "http status " + std::to_string(response.status), latency);
        try {
            xml::parse_xml(response.body);
        } catch (const xml::ParseError& e) {
            return down_info(resource, std::string("invalid payload: ") + e.what(), latency);
        }
        return up_info(resource, std::move(response.body), latency);
    } catch (const std::invalid_argument& e) {
        return down_info(resource, std::string("invalid endpoint: ") + e.what());
    } catch (const net::NetError& e) {
        return down_info(resource, describe(e, timeout), elapsed_ms(start));
    } catch (const std::exception& e) {
        return down_info(resource, std::string("gather failed: ") + e.what(), elapsed_ms(start));
    }
}

}  // namespace gridmap
