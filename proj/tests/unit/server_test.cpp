#include "doctest.h"

#include "gridmap/core/portal.hpp"
#include "gridmap/render/render.hpp"
#include "gridmap/server/server.hpp"
#include "support/api_client.hpp"
#include "support/conformance.hpp"
#include "support/search_fixture.hpp"
#include "support/temp_dir.hpp"

#include <fstream>
#include <sstream>

using namespace gridmap;
using nlohmann::json;

namespace {

const std::filesystem::path kShare = GRIDMAP_SHARE_DIR;
const std::filesystem::path kGolden = GRIDMAP_GOLDEN_DIR;

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Running {
    support::TempDir dir;
    Store store{dir.path()};
    GathererRegistry registry = load_registry(kShare / "gatherers.json");
    std::unique_ptr<ApiServer> server;
    int port = 0;

    explicit Running(ServerOptions options = {})
    {
        store.initialize();
        server = std::make_unique<ApiServer>(store, registry, std::move(options));
        port = server->bind("127.0.0.1", 0);
        server->start();
    }

    support::ApiClient client() const { return support::ApiClient(port); }
};

ResourceInfo recorded(const std::string& id, ResourceStatus status, std::string payload,
                      std::optional<std::string> error = std::nullopt)
{
    ResourceInfo i;
    i.resource_id = id;
    i.status = status;
    i.payload_xml = std::move(payload);
    i.error = std::move(error);
    i.gathered_at = now();
    return i;
}

}  // namespace

TEST_CASE("listen address parsing")
{
    CHECK(parse_listen(kDefaultListen) == std::pair<std::string, int>{"127.0.0.1", 8642});
    CHECK(parse_listen("0.0.0.0:0").second == 0);
    CHECK_THROWS_AS(parse_listen("8642"), ValidationError);
    CHECK_THROWS_AS(parse_listen("h:70000"), ValidationError);
    CHECK_THROWS_AS(parse_listen("h:x"), ValidationError);
}

TEST_CASE("GET /api/resources")
{
    Running s;
    auto api = s.client();
    auto empty = api.get("/api/resources");
    CHECK(empty.status == 200);
    CHECK(empty.json() == json::array());

    std::vector<std::string> ids;
    for (const char* host : {"hpc.example.org", "srb.example.org", "scope.example.org"}) {
        auto r = api.post("/api/resources", json{{"hostname", host}}.dump());
        REQUIRE(r.status == 201);
        ids.push_back(r.json()["id"]);
    }
    api.put("/api/resources/" + ids[0], R"({"type":"cluster"})");
    api.put("/api/resources/" + ids[1], R"({"type":"storage"})");
    s.store.record_info(recorded(ids[0], ResourceStatus::Up, slurp(kGolden / "cluster.xml")));
    s.store.record_info(recorded(ids[1], ResourceStatus::Down, "", "http status 500"));

    auto list = api.get("/api/resources").json();
    REQUIRE(list.size() == 3);
    CHECK(list[0]["status"] == "UP");
    CHECK(list[1]["status"] == "DOWN");
    CHECK(list[2]["status"] == "UNKNOWN");

    // Oracle: compose core and render directly.
    auto state = s.store.load();
    for (std::size_t i = 0; i < state.resources.size(); ++i) {
        const auto& r = state.resources[i];
        auto info = s.store.find_info(r.id);
        json expected = {{"resource", r},
                         {"status", to_string(info ? info->status : ResourceStatus::Unknown)},
                         {"stale", false},
                         {"list_row_html", render_list_row(r, info, s.registry)}};
        CHECK(list[i] == expected);
    }
}

TEST_CASE("resource CRUD")
{
    Running s;
    auto api = s.client();

    auto created = api.post("/api/resources", R"({"hostname":"n1"})");
    CHECK(created.status == 201);
    auto r = created.json();
    CHECK(r["type"] == "unconfigured");
    CHECK(r["hostname"] == "n1");
    CHECK(r["label"] == "n1");
    std::string id = r["id"];

    auto with_location = api.post("/api/resources", R"({"hostname":"n2","location":{"lat":-37.8,"lon":144.9}})");
    CHECK(with_location.json()["location"]["lat"] == -37.8);

    CHECK(is_api_error(api.post("/api/resources", R"({"hostname":"  "})"), 422));
    CHECK(is_api_error(api.post("/api/resources", R"({"host":"n3"})"), 422));
    CHECK(is_api_error(api.post("/api/resources", "{not json"), 400));

    auto updated = api.put("/api/resources/" + id, R"({"label":"Node One","location":{"lat":10.5}})");
    CHECK(updated.status == 200);
    CHECK(updated.json()["label"] == "Node One");
    CHECK(updated.json()["location"]["lat"] == 10.5);
    CHECK(updated.json()["location"]["lon"] == 0);
    CHECK(api.get("/api/resources").json()[0]["resource"] == updated.json());

    CHECK(is_api_error(api.put("/api/resources/" + id, R"({"location":{"lat":95}})"), 422));
    CHECK(is_api_error(api.put("/api/resources/" + id, R"({"id":"x"})"), 422));
    CHECK(is_api_error(api.put("/api/resources/" + id, R"({"port":0})"), 422));
    CHECK(is_api_error(api.put("/api/resources/nope", R"({"label":"x"})"), 404));
    CHECK(s.store.load().find(id)->label == "Node One");

    s.store.record_info(recorded(id, ResourceStatus::Down, "", "port required"));
    auto deleted = api.del("/api/resources/" + id);
    CHECK(deleted.status == 204);
    auto after = api.get("/api/resources").json();
    CHECK(after.size() == 1);
    CHECK(after[0]["resource"]["hostname"] == "n2");
    CHECK_FALSE(std::filesystem::exists(s.store.info_path(id)));
    CHECK(is_api_error(api.del("/api/resources/" + id), 404));
}

TEST_CASE("popup endpoint")
{
    Running s;
    auto api = s.client();
    std::string id = api.post("/api/resources", R"({"hostname":"hpc","type":"cluster"})").json()["id"];

    auto never = api.get("/api/resources/" + id + "/popup");
    CHECK(never.status == 200);
    CHECK(never.content_type.rfind("text/html", 0) == 0);
    CHECK(never.body.find("UNKNOWN") != std::string::npos);

    auto info = recorded(id, ResourceStatus::Up, slurp(kGolden / "cluster.xml"));
    s.store.record_info(info);
    auto up = api.get("/api/resources/" + id + "/popup");
    CHECK(up.body == render_popup(*s.store.load().find(id), info, s.registry));
    CHECK(support::normalize_whitespace(up.body) ==
          support::normalize_whitespace(slurp(kGolden / "cluster.popup.html")));

    CHECK(is_api_error(api.get("/api/resources/nope/popup"), 404));
}

TEST_CASE("search endpoint")
{
    Running s;
    auto api = s.client();
    CHECK(api.get("/api/search").json() == json::array());
    for (const char* host : {"alpha.example.org", "beta.example.org"})
        api.post("/api/resources", json{{"hostname", host}}.dump());
    CHECK(api.get("/api/search").json().size() == 2);
    CHECK(api.search("zzz-no-match").json() == json::array());
    CHECK(api.search("ALPHA").json().size() == 1);

    for (std::uint32_t seed : {3u, 4u}) {
        auto f = support::make_search_fixture(seed);
        s.store.save(f.state);
        for (const auto& [id, info] : f.infos)
            s.store.record_info(info);
        for (const auto& kw : support::search_keywords()) {
            INFO("keyword='" << kw << "'");
            CHECK(api.search(kw).json() == json(search(kw, f.state, f.infos)));
        }
    }
}

TEST_CASE("map config")
{
    Running s;
    auto api = s.client();
    auto initial = api.get("/api/map-config");
    CHECK(initial.status == 200);
    CHECK(initial.json() == json(MapConfig{}));
    CHECK(initial.json()["zoom"] == 2);

    MapConfig custom;
    custom.tile_url_template = "https://tiles.example.org/{z}/{x}/{y}.png";
    custom.api_key = "opaque";
    custom.center = {-25.27, 133.77};
    custom.zoom = 4;
    custom.allow_pan = false;
    auto put = api.put("/api/map-config", json(custom).dump());
    CHECK(put.status == 200);
    CHECK(api.get("/api/map-config").json() == json(custom));

    auto partial = api.put("/api/map-config", R"({"allow_zoom":false})");
    CHECK(partial.json()["allow_zoom"] == false);
    CHECK(partial.json()["zoom"] == 4);

    CHECK(is_api_error(api.put("/api/map-config", R"({"zoom":25})"), 422));
    CHECK(is_api_error(api.put("/api/map-config", R"({"zoom":"4"})"), 422));
    CHECK(is_api_error(api.put("/api/map-config", R"({"colour":"red"})"), 422));
    CHECK(is_api_error(api.put("/api/map-config", "[1,2"), 400));
    CHECK(api.get("/api/map-config").json()["zoom"] == 4);
}

TEST_CASE("error bodies are always ApiError")
{
    Running s;
    auto api = s.client();
    CHECK(is_api_error(api.get("/"), 404));
    CHECK(is_api_error(api.get("/api/nothing"), 404));
    CHECK(is_api_error(api.del("/api/map-config"), 404));

    std::ofstream(s.store.portal_path()) << "{";
    auto broken = api.get("/api/resources");
    CHECK(is_api_error(broken, 500));
    CHECK(broken.json()["code"] == "store_error");
}

TEST_CASE("static assets are optional")
{
    support::TempDir ui;
    std::ofstream(ui.path() / "index.html") << "<!doctype html><title>map</title>";
    Running s(ServerOptions{ui.path(), std::chrono::seconds(30)});
    auto api = s.client();
    auto index = api.get("/index.html");
    CHECK(index.status == 200);
    CHECK(index.body.find("map") != std::string::npos);
    CHECK(api.get("/api/resources").status == 200);

    support::TempDir dir;
    Store store(dir.path());
    GathererRegistry registry;
    CHECK_THROWS_AS(ApiServer(store, registry, ServerOptions{dir.path() / "missing", std::chrono::seconds(30)}),
                    Error);
}

TEST_CASE("stale flag follows the monitor interval")
{
    Running s(ServerOptions{std::nullopt, std::chrono::seconds(1)});
    auto api = s.client();
    std::string id = api.post("/api/resources", R"({"hostname":"old"})").json()["id"];
    auto info = recorded(id, ResourceStatus::Up, "<a/>");
    info.gathered_at = now() - std::chrono::seconds(10);
    s.store.record_info(info);
    CHECK(api.get("/api/resources").json()[0]["stale"] == true);
    info.gathered_at = now();
    s.store.record_info(info);
    CHECK(api.get("/api/resources").json()[0]["stale"] == false);
}

TEST_CASE("desk-scale latency: 100 resources")
{
    Running s;
    auto api = s.client();
    auto state = s.store.load();
    for (int i = 0; i < 100; ++i) {
        state = add_resource(state, "n" + std::to_string(i) + ".example.org").first;
        state.resources.back().type = i % 2 ? "cluster" : "storage";
    }
    s.store.save(state);
    for (const auto& r : state.resources)
        s.store.record_info(recorded(r.id, ResourceStatus::Up, slurp(kGolden / (r.type + ".xml"))));

    for (const std::string& path : std::vector<std::string>{"/api/resources", "/api/search?q=cpu", "/api/map-config",
                                   "/api/resources/" + state.resources[7].id + "/popup"}) {
        auto start = std::chrono::steady_clock::now();
        auto reply = api.get(path);
        auto elapsed = std::chrono::steady_clock::now() - start;
        INFO(path);
        CHECK(reply.status == 200);
        CHECK(elapsed < std::chrono::seconds(2));
    }
}
