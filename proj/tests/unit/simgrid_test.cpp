#include "doctest.h"

#include "gridmap/gatherers/net.hpp"
#include "gridmap/simgrid/simgrid.hpp"
#include "gridmap/xml/document.hpp"
#include "support/temp_dir.hpp"

#include <fstream>

using namespace gridmap;
using namespace gridmap::simgrid;
using nlohmann::json;

namespace {

net::HttpResponse fetch(const std::string& url)
{
    return net::http_get(net::parse_http_url(url), net::Clock::now() + std::chrono::seconds(5));
}

}  // namespace

TEST_CASE("load_scenario accepts a valid file")
{
    support::TempDir dir;
    std::ofstream(dir.path() / "s.json") << R"({"services":[
        {"name":"hpc1","port":0,"schema":"cluster","mode":"healthy","seed":1},
        {"name":"srb","port":0,"schema":"storage","mode":"slow","delay_ms":200,"seed":2},
        {"name":"scope","port":0,"schema":"instrument","mode":"flaky","fail_probability":0.25,"seed":3}]})";
    auto s = load_scenario(dir.path() / "s.json");
    REQUIRE(s.services.size() == 3);
    CHECK(s.services[1].mode == Mode::Slow);
    CHECK(s.services[1].delay_ms == 200);
    CHECK(s.services[2].fail_probability == 0.25);
    CHECK(parse_scenario(to_json(s)).services.size() == 3);
}

TEST_CASE("scenario validation")
{
    CHECK_THROWS_WITH_AS(parse_scenario(json::parse(R"([{"name":"a","port":9001},{"name":"b","port":9001}])")),
                         doctest::Contains("duplicate port"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_scenario(json::parse(R"([{"name":"a","mode":"sleepy"}])")),
                         doctest::Contains("mode"), ValidationError);
    CHECK_THROWS_AS(parse_scenario(json::parse(R"([{"name":"a","schema":"ldap"}])")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(json::parse(R"([{"name":"a","mode":"flaky","fail_probability":1.5}])")),
                    ValidationError);
    CHECK_THROWS_AS(parse_scenario(json::parse(R"([{"name":"a"},{"name":"a"}])")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(json::parse(R"([{"port":1}])")), ValidationError);
    CHECK(parse_scenario(json::parse(R"([{"name":"a","port":0},{"name":"b","port":0}])")).services.size() == 2);
}

TEST_CASE("schema payloads")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (auto schema : {Schema::Cluster, Schema::Storage, Schema::Instrument}) {
            MockService s{"s", 0, schema, Mode::Healthy, 0, 0, seed};
            auto doc = xml::parse_xml(payload(s));
            CHECK(doc.document_element().name() == root_element(schema));
            CHECK(payload(s) == payload(s));
            CHECK_FALSE(xml::is_well_formed(malformed_payload(s)));
        }
    }
    MockService c{"c", 0, Schema::Cluster, Mode::Healthy, 0, 0, 1};
    auto doc = xml::parse_xml(payload(c));
    auto& root = doc.document_element();
    CHECK(root.children().size() == 2);
    CHECK(root.children()[0]->name() == "queues");
    CHECK(root.children()[0]->children()[0]->attribute("length") != nullptr);
    CHECK(root.children()[1]->attribute("free") != nullptr);
}

TEST_CASE("flaky sequence is reproducible")
{
    auto record = [] {
        FlakySequence seq(7, 0.5);
        std::vector<bool> out;
        for (int i = 0; i < 100; ++i)
            out.push_back(seq.next_fails());
        return out;
    };
    auto first = record();
    CHECK(first == record());
    auto failures = std::count(first.begin(), first.end(), true);
    CHECK(failures > 20);
    CHECK(failures < 80);
}

TEST_CASE("served grid answers per mode")
{
    Scenario scenario;
    scenario.services = {{"hpc", 0, Schema::Cluster, Mode::Healthy, 0, 0, 1},
                         {"scope", 0, Schema::Instrument, Mode::Flaky, 0, 0.5, 7},
                         {"off", 0, Schema::Storage, Mode::Down, 0, 0, 2},
                         {"junk", 0, Schema::Storage, Mode::Malformed, 0, 0, 3}};
    Grid grid(scenario);

    auto healthy = fetch(grid.url("hpc"));
    CHECK(healthy.status == 200);
    CHECK(xml::parse_xml(healthy.body).document_element().name() == "cluster");

    auto junk = fetch(grid.url("junk"));
    CHECK(junk.status == 200);
    CHECK_FALSE(xml::is_well_formed(junk.body));

    CHECK(grid.port("off") > 0);
    CHECK_THROWS_AS(fetch(grid.url("off")), net::NetError);

    FlakySequence oracle(7, 0.5);
    for (int i = 0; i < 100; ++i) {
        auto r = fetch(grid.url("scope"));
        CHECK(r.status == (oracle.next_fails() ? 500 : 200));
    }
}

TEST_CASE("slow service delays its answer")
{
    Scenario scenario;
    scenario.services = {{"slow", 0, Schema::Storage, Mode::Slow, 300, 0, 1}};
    Grid grid(scenario);
    auto start = std::chrono::steady_clock::now();
    CHECK(fetch(grid.url("slow")).status == 200);
    CHECK(std::chrono::steady_clock::now() - start >= std::chrono::milliseconds(300));
}
