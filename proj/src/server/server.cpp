#include "gridmap/server/server.hpp"

#include "gridmap/core/errors.hpp"
#include "gridmap/core/portal.hpp"
#include "gridmap/render/render.hpp"

#include "httplib.h"

#include <charconv>
#include <thread>

namespace gridmap {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

const char* code_for(int status)
{
    switch (status) {
    case 400:
        return "bad_request";
    case 404:
        return "not_found";
    case 405:
        return "method_not_allowed";
    case 413:
        return "payload_too_large";
    case 422:
        return "validation_error";
    default:
        return status >= 500 ? "internal_error" : "http_error";
    }
}

void send_error(httplib::Response& res, int status, std::string code, std::string message)
{
    res.status = status;
    res.set_content(to_json(ApiError{status, std::move(code), std::move(message)}).dump(), kJson);
}

void send_json(httplib::Response& res, const json& body, int status = 200)
{
    res.status = status;
    res.set_content(body.dump(), kJson);
}

json parse_body(const httplib::Request& req)
{
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("request body is not valid JSON: ") + e.what());
    }
}

// Maps domain exceptions onto ApiError responses.
template <typename Handler>
httplib::Server::Handler guarded(Handler handler)
{
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const NotFoundError& e) {
            send_error(res, 404, "not_found", e.what());
        } catch (const ValidationError& e) {
            send_error(res, 422, "validation_error", e.what());
        } catch (const std::invalid_argument& e) {
            send_error(res, 400, "bad_request", e.what());
        } catch (const StoreError& e) {
            send_error(res, 500, "store_error", e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "internal_error", e.what());
        }
    };
}

}  // namespace

json to_json(const ApiError& error)
{
    return {{"http_status", error.http_status}, {"code", error.code}, {"message", error.message}};
}

std::pair<std::string, int> parse_listen(std::string_view text)
{
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
        throw ValidationError("listen address must be HOST:PORT, got '" + std::string(text) + "'");
    int port = -1;
    auto digits = text.substr(colon + 1);
    auto r = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (r.ec != std::errc() || r.ptr != digits.data() + digits.size() || port < 0 || port > 65535)
        throw ValidationError("bad port in listen address '" + std::string(text) + "'");
    return {std::string(text.substr(0, colon)), port};
}

struct ApiServer::Impl {
    Store& store;
    const GathererRegistry& registry;
    ServerOptions options;
    httplib::Server http;
    std::thread thread;
    bool bound = false;

    Impl(Store& s, const GathererRegistry& r, ServerOptions o) : store(s), registry(r), options(std::move(o)) {}

    void routes();
};

void ApiServer::Impl::routes()
{
    http.Get("/api/resources", guarded([this](const httplib::Request&, httplib::Response& res) {
        auto state = store.load();
        auto infos = store.infos_for(state);
        auto at = now();
        json out = json::array();
        for (const auto& r : state.resources) {
            std::optional<ResourceInfo> info;
            if (auto it = infos.find(r.id); it != infos.end())
                info = it->second;
            out.push_back({{"resource", r},
                           {"status", to_string(info ? info->status : ResourceStatus::Unknown)},
                           {"stale", is_stale(info, options.interval, at)},
                           {"list_row_html", render_list_row(r, info, registry)}});
        }
        send_json(res, out);
    }));

    http.Post("/api/resources", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req);
        if (!body.is_object() || !body.contains("hostname") || !body["hostname"].is_string())
            throw ValidationError("body must be an object with a string 'hostname'");
        auto hostname = body["hostname"].get<std::string>();
        body.erase("hostname");
        auto patch = patch_from_json(body);
        Resource created;
        store.modify([&](PortalState& state) {
            auto [next, r] = add_resource(std::move(state), hostname);
            if (!patch.empty())
                next = update_resource(std::move(next), r.id, patch);
            created = *next.find(r.id);
            state = std::move(next);
        });
        send_json(res, created, 201);
    }));

    http.Put(R"(/api/resources/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        std::string id = req.matches[1];
        auto patch = patch_from_json(parse_body(req));
        Resource updated;
        store.modify([&](PortalState& state) {
            state = update_resource(std::move(state), id, patch);
            updated = *state.find(id);
        });
        send_json(res, updated);
    }));

    http.Delete(R"(/api/resources/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        std::string id = req.matches[1];
        store.modify([&](PortalState& state) { state = delete_resource(std::move(state), id, store); });
        res.status = 204;
    }));

    http.Get(R"(/api/resources/([^/]+)/popup)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        std::string id = req.matches[1];
        auto state = store.load();
        const auto* r = state.find(id);
        if (!r)
            throw NotFoundError("no resource with id '" + id + "'");
        res.set_content(render_popup(*r, store.find_info(id), registry), "text/html; charset=utf-8");
    }));

    http.Get("/api/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto state = store.load();
        auto q = req.has_param("q") ? req.get_param_value("q") : std::string();
        send_json(res, search(q, state, store.infos_for(state)));
    }));

    http.Get("/api/map-config", guarded([this](const httplib::Request&, httplib::Response& res) {
        send_json(res, store.load().map);
    }));

    http.Put("/api/map-config", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req);
        if (!body.is_object())
            throw ValidationError("map config must be a JSON object");
        MapConfig updated;
        store.modify([&](PortalState& state) {
            json merged = state.map;
            for (const auto& [key, value] : body.items()) {
                if (!merged.contains(key))
                    throw ValidationError("unknown map config field '" + key + "'");
                merged[key] = value;
            }
            updated = merged.get<MapConfig>();
            validate(updated);
            state.map = updated;
        });
        send_json(res, updated);
    }));

    http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty())
            return httplib::Server::HandlerResponse::Unhandled;
        send_error(res, res.status, code_for(res.status),
                   res.status == 404 ? "no such route" : "request failed with status " + std::to_string(res.status));
        return httplib::Server::HandlerResponse::Handled;
    });
    http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
        send_error(res, 500, "internal_error", "unhandled server error");
    });

    if (options.static_dir && !http.set_mount_point("/", options.static_dir->string()))
        throw Error("static directory " + options.static_dir->string() + " does not exist");
}

ApiServer::ApiServer(Store& store, const GathererRegistry& registry, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, registry, std::move(options)))
{
    impl_->routes();
}

ApiServer::~ApiServer()
{
    stop();
}

int ApiServer::bind(const std::string& host, int port)
{
    int bound = port == 0 ? impl_->http.bind_to_any_port(host) : (impl_->http.bind_to_port(host, port) ? port : -1);
    if (bound <= 0)
        throw Error("cannot listen on " + host + ":" + std::to_string(port));
    impl_->bound = true;
    return bound;
}

void ApiServer::run()
{
    if (!impl_->bound)
        throw Error("ApiServer::run called before bind");
    impl_->http.listen_after_bind();
}

void ApiServer::start()
{
    if (!impl_->bound)
        throw Error("ApiServer::start called before bind");
    impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
}

void ApiServer::stop()
{
    impl_->http.stop();
    if (impl_->thread.joinable())
        impl_->thread.join();
}

}  // namespace gridmap
