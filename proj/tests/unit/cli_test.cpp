#include "doctest.h"

#include "gridmap/core/store.hpp"
#include "gridmap/simgrid/simgrid.hpp"
#include "support/api_client.hpp"
#include "support/process.hpp"
#include "support/sockets.hpp"
#include "support/temp_dir.hpp"

#include <fstream>
#include <thread>

using namespace gridmap;
using nlohmann::json;
using support::run_process;

namespace {

const std::string kCli = GRIDMAP_CLI;

support::ProcessResult gridmap_cli(const support::TempDir& dir, std::vector<std::string> args,
                                   const std::string& input = {})
{
    args.insert(args.begin(), {kCli, "--state-dir", dir.path().string()});
    return run_process(args, input);
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos)
            end = text.size();
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("add then ls shows the resource")
{
    support::TempDir dir;
    auto added = gridmap_cli(dir, {"add", "n1"});
    REQUIRE(added.exit_code == 0);
    auto id = lines(added.out).at(0);
    CHECK(id.size() == 32);

    auto ls = gridmap_cli(dir, {"ls"});
    CHECK(ls.exit_code == 0);
    auto rows = lines(ls.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == id + "\tn1\tunconfigured\tUNKNOWN\tenabled\tn1");
}

TEST_CASE("errors exit 1 with a message on stderr")
{
    support::TempDir dir;
    auto rm = gridmap_cli(dir, {"rm", "no-such-id"});
    CHECK(rm.exit_code == 1);
    CHECK(rm.err.find("no-such-id") != std::string::npos);
    CHECK(rm.out.empty());

    CHECK(gridmap_cli(dir, {"add", " "}).exit_code == 1);
    CHECK(gridmap_cli(dir, {"set", "x", "label=y"}).exit_code == 1);
    CHECK(gridmap_cli(dir, {"frobnicate"}).exit_code == 1);
    CHECK(run_process({kCli}).exit_code == 1);
    CHECK(run_process({kCli, "--help"}).exit_code == 0);

    auto id = lines(gridmap_cli(dir, {"add", "n1"}).out).at(0);
    auto bad = gridmap_cli(dir, {"set", id, "lat=91"});
    CHECK(bad.exit_code == 1);
    CHECK_FALSE(bad.err.empty());
    CHECK(gridmap_cli(dir, {"import", "-"}, "{\"version\":1").exit_code == 1);
    CHECK(gridmap_cli(dir, {"import", (dir.path() / "absent.json").string()}).exit_code == 1);
}

TEST_CASE("set, rm")
{
    support::TempDir dir;
    auto id = lines(gridmap_cli(dir, {"add", "n1"}).out).at(0);
    auto set = gridmap_cli(dir, {"set", id, "type=tcp-probe", "port=22", "label=Head node"});
    REQUIRE(set.exit_code == 0);
    auto r = json::parse(set.out);
    CHECK(r["type"] == "tcp-probe");
    CHECK(r["port"] == 22);
    CHECK(r["label"] == "Head node");

    Store store(dir.path());
    CHECK(store.load().find(id)->port == 22);
    CHECK(gridmap_cli(dir, {"rm", id}).exit_code == 0);
    CHECK(store.load().resources.empty());
}

TEST_CASE("export | import round-trips")
{
    support::TempDir a, b;
    for (const char* host : {"n1", "n2", "n3"})
        gridmap_cli(a, {"add", host});
    auto id = lines(gridmap_cli(a, {"ls"}).out).at(1).substr(0, 32);
    gridmap_cli(a, {"set", id, "enabled=false", "lat=-33.9"});

    auto exported = gridmap_cli(a, {"export"});
    REQUIRE(exported.exit_code == 0);
    REQUIRE(gridmap_cli(b, {"import", "-"}, exported.out).exit_code == 0);
    CHECK(gridmap_cli(b, {"export"}).out == exported.out);
    CHECK(Store(b.path()).load() == Store(a.path()).load());
}

TEST_CASE("monitor --once prints a cycle report and writes info files")
{
    support::TempDir dir;
    support::Listener listener;
    auto id = lines(gridmap_cli(dir, {"add", "127.0.0.1"}).out).at(0);
    gridmap_cli(dir, {"set", id, "type=tcp-probe", "port=" + std::to_string(listener.port())});
    gridmap_cli(dir, {"add", "unset.example.org"});

    auto run = gridmap_cli(dir, {"monitor", "--once", "--timeout", "2000"});
    REQUIRE(run.exit_code == 0);
    auto rows = lines(run.out);
    REQUIRE(rows.size() == 1);
    auto report = json::parse(rows[0]);
    REQUIRE(report["outcomes"].size() == 2);
    Store store(dir.path());
    CHECK(store.find_info(id)->status == ResourceStatus::Up);
    CHECK(std::filesystem::exists(store.info_path(id)));

    CHECK(gridmap_cli(dir, {"monitor", "--once", "--timeout", "0"}).exit_code == 1);
}

TEST_CASE("serve answers until SIGTERM")
{
    support::TempDir dir;
    gridmap_cli(dir, {"add", "n1"});
    int port = support::closed_port();
    support::Child serve(
        {kCli, "--state-dir", dir.path().string(), "serve", "--listen", "127.0.0.1:" + std::to_string(port)});
    support::ApiClient api(port);
    support::Reply reply;
    for (int i = 0; i < 100; ++i) {
        try {
            reply = api.get("/api/resources");
            break;
        } catch (const std::exception&) {
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
        }
    }
    CHECK(reply.status == 200);
    CHECK(reply.json().size() == 1);
    CHECK(serve.terminate() == 0);
}

TEST_CASE("simgrid serve rejects a missing scenario")
{
    support::TempDir dir;
    std::ofstream(dir.path() / "scenario.json")
        << R"({"services":[{"name":"hpc","port":0,"schema":"cluster","mode":"healthy","seed":1}]})";
    auto bad = run_process({SIMGRID_CLI, "serve", (dir.path() / "missing.json").string()});
    CHECK(bad.exit_code == 1);
    CHECK_FALSE(bad.err.empty());
}
