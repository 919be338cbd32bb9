#pragma once

#include "gridmap/gatherers/gatherer.hpp"

namespace gridmap {

/// Connects to hostname:port. Payload:
///   <tcp-probe><host>..</host><port>..</port><latency-ms>..</latency-ms></tcp-probe>
class TcpProbeGatherer final : public Gatherer {
public:
    ResourceInfo gather(const Resource& resource, std::chrono::milliseconds timeout) const override;
};

/// GETs resource.endpoint and passes a well-formed XML body through as the
/// payload. Latency runs from request start to the last body byte.
class HttpXmlGatherer final : public Gatherer {
public:
    ResourceInfo gather(const Resource& resource, std::chrono::milliseconds timeout) const override;
};

}  // namespace gridmap
