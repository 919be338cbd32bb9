#pragma once

#include "gridmap/core/store.hpp"
#include "gridmap/gatherers/gatherer.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace gridmap {

inline constexpr std::string_view kDefaultListen = "127.0.0.1:8642";

/// Body of every non-2xx response.
struct ApiError {
    int http_status = 500;
    std::string code;
    std::string message;
};

nlohmann::json to_json(const ApiError& error);

struct ServerOptions {
    /// Served at "/" when set; the API works without it.
    std::optional<std::filesystem::path> static_dir;
    /// The monitor's interval, used for the stale flag.
    std::chrono::seconds interval{30};
};

/// HTTP API over a state directory:
///
///   GET    /api/resources              [{resource, status, stale, list_row_html}]
///   POST   /api/resources              {"hostname": ...} -> 201 Resource
///   PUT    /api/resources/{id}         patch -> Resource
///   DELETE /api/resources/{id}         -> 204
///   GET    /api/resources/{id}/popup   text/html fragment
///   GET    /api/search?q=              [id, ...]
///   GET    /api/map-config             MapConfig
///   PUT    /api/map-config             partial or full MapConfig -> MapConfig
///
/// The server never polls; it reads the info files the monitor wrote.
class ApiServer {
public:
    ApiServer(Store& store, const GathererRegistry& registry, ServerOptions options = {});
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Port 0 binds an ephemeral port. Returns the bound port; throws Error.
    int bind(const std::string& host, int port);

    /// Serves until stop(). Requires bind().
    void run();

    /// run() on a background thread; returns once requests are accepted.
    void start();

    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// "HOST:PORT" -> {host, port}. Throws ValidationError.
std::pair<std::string, int> parse_listen(std::string_view text);

}  // namespace gridmap
