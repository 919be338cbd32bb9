#include "gridmap/simgrid/simgrid.hpp"

#include "httplib.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <thread>

namespace gridmap::simgrid {

using nlohmann::json;

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& text, const std::pair<Enum, std::string_view> (&names)[N], const char* what)
{
    for (const auto& [value, name] : names)
        if (name == text)
            return value;
    throw ValidationError(std::string("unknown ") + what + " '" + text + "'");
}

constexpr std::pair<Schema, std::string_view> kSchemas[] = {
    {Schema::Cluster, "cluster"}, {Schema::Storage, "storage"}, {Schema::Instrument, "instrument"}};
constexpr std::pair<Mode, std::string_view> kModes[] = {{Mode::Healthy, "healthy"},
                                                        {Mode::Slow, "slow"},
                                                        {Mode::Flaky, "flaky"},
                                                        {Mode::Down, "down"},
                                                        {Mode::Malformed, "malformed"}};

// Binds an ephemeral loopback port without listening and releases it.
int unused_port()
{
    int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    socklen_t len = sizeof addr;
    bool ok = fd >= 0 && ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0 &&
              ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) == 0;
    if (fd >= 0)
        ::close(fd);
    if (!ok)
        throw Error("cannot reserve a port for a down service");
    return ntohs(addr.sin_port);
}

}  // namespace

std::string_view to_string(Schema schema)
{
    for (const auto& [value, name] : kSchemas)
        if (value == schema)
            return name;
    return "?";
}

std::string_view to_string(Mode mode)
{
    for (const auto& [value, name] : kModes)
        if (value == mode)
            return name;
    return "?";
}

std::string_view root_element(Schema schema)
{
    switch (schema) {
    case Schema::Cluster:
        return "cluster";
    case Schema::Storage:
        return "store";
    case Schema::Instrument:
        return "instrument";
    }
    return "?";
}

Scenario parse_scenario(const json& j)
{
    const json& list = j.is_object() && j.contains("services") ? j["services"] : j;
    if (!list.is_array())
        throw ValidationError("scenario must be an array of services or {\"services\": [...]}");
    Scenario scenario;
    std::set<int> ports;
    std::set<std::string> names;
    try {
        for (const auto& item : list) {
            MockService s;
            s.name = item.at("name").get<std::string>();
            s.port = item.value("port", 0);
            s.schema = parse_enum(item.value("schema", std::string("cluster")), kSchemas, "schema");
            s.mode = parse_enum(item.value("mode", std::string("healthy")), kModes, "mode");
            s.delay_ms = item.value("delay_ms", 0);
            s.fail_probability = item.value("fail_probability", 0.0);
            s.seed = item.value("seed", std::uint64_t{0});
            if (s.name.empty() || !names.insert(s.name).second)
                throw ValidationError("service names must be non-empty and distinct ('" + s.name + "')");
            if (s.port < 0 || s.port > 65535)
                throw ValidationError("service '" + s.name + "': port out of range");
            if (s.port != 0 && !ports.insert(s.port).second)
                throw ValidationError("service '" + s.name + "': duplicate port " + std::to_string(s.port));
            if (!(s.fail_probability >= 0 && s.fail_probability <= 1))
                throw ValidationError("service '" + s.name + "': fail_probability must be in [0,1]");
            if (s.delay_ms < 0)
                throw ValidationError("service '" + s.name + "': delay_ms must not be negative");
            scenario.services.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed scenario: ") + e.what());
    }
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open " + path.string());
    try {
        return parse_scenario(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

json to_json(const Scenario& scenario)
{
    json list = json::array();
    for (const auto& s : scenario.services) {
        json item = {{"name", s.name},
                     {"port", s.port},
                     {"schema", to_string(s.schema)},
                     {"mode", to_string(s.mode)},
                     {"seed", s.seed}};
        if (s.mode == Mode::Slow)
            item["delay_ms"] = s.delay_ms;
        if (s.mode == Mode::Flaky)
            item["fail_probability"] = s.fail_probability;
        list.push_back(std::move(item));
    }
    return {{"services", list}};
}

std::string payload(const MockService& service)
{
    std::mt19937_64 rng(service.seed);
    auto between = [&](int lo, int hi) { return static_cast<int>(lo + rng() % static_cast<unsigned>(hi - lo + 1)); };
    std::string out;
    switch (service.schema) {
    case Schema::Cluster: {
        static const char* const queues[] = {"batch", "short", "long", "gpu", "debug"};
        out = "<cluster><queues>";
        int n = between(1, 4);
        for (int i = 0; i < n; ++i)
            out += "<queue name=\"" + std::string(queues[i]) + "\" length=\"" + std::to_string(between(0, 40)) + "\"/>";
        int total = 8 * between(1, 32);
        out += "</queues><cpus total=\"" + std::to_string(total) + "\" free=\"" + std::to_string(between(0, total)) +
               "\"/></cluster>";
        break;
    }
    case Schema::Storage: {
        int capacity = 256 * between(1, 64);
        out = "<store><capacity-gb>" + std::to_string(capacity) + "</capacity-gb><used-gb>" +
              std::to_string(between(0, capacity)) + "</used-gb></store>";
        break;
    }
    case Schema::Instrument: {
        static const char* const states[] = {"idle", "observing", "calibrating", "maintenance"};
        auto state = states[between(0, 3)];
        int reading = between(0, 99999);
        out = "<instrument><state>" + std::string(state) + "</state><last-reading>" + std::to_string(reading / 100) +
              "." + std::to_string(reading % 100 / 10) + std::to_string(reading % 10) +
              "</last-reading></instrument>";
        break;
    }
    }
    return out;
}

std::string malformed_payload(const MockService& service)
{
    auto full = payload(service);
    return full.substr(0, full.size() / 2);
}

struct FlakySequence::State {
    std::mutex mutex;
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> draw{0.0, 1.0};
    double p;
};

FlakySequence::FlakySequence(std::uint64_t seed, double fail_probability) : state_(std::make_shared<State>())
{
    state_->rng.seed(seed);
    state_->p = fail_probability;
}

bool FlakySequence::next_fails()
{
    std::lock_guard lock(state_->mutex);
    return state_->draw(state_->rng) < state_->p;
}

// --------------------------------------------------------------------

struct Grid::Impl {
    struct Running {
        std::unique_ptr<httplib::Server> server;
        std::thread thread;
    };

    Scenario scenario;
    std::vector<Running> running;
    std::mutex stop_mutex;
    std::condition_variable stop_cv;
    bool stopping = false;

    void serve(MockService& service);
    void stop();
};

void Grid::Impl::serve(MockService& service)
{
    if (service.mode == Mode::Down) {
        if (service.port == 0)
            service.port = unused_port();
        return;
    }

    auto server = std::make_unique<httplib::Server>();
    server->new_task_queue = [] { return new httplib::ThreadPool(4); };
    std::string body = service.mode == Mode::Malformed ? malformed_payload(service) : payload(service);
    auto delay = std::chrono::milliseconds(service.mode == Mode::Slow ? service.delay_ms : 0);
    std::optional<FlakySequence> flaky;
    if (service.mode == Mode::Flaky)
        flaky.emplace(service.seed, service.fail_probability);

    server->Get("/info", [this, body, delay, flaky](const httplib::Request&, httplib::Response& res) mutable {
        if (delay.count() > 0) {
            std::unique_lock lock(stop_mutex);
            if (stop_cv.wait_for(lock, delay, [this] { return stopping; }))
                return;
        }
        if (flaky && flaky->next_fails()) {
            res.status = 500;
            res.set_content("simulated failure\n", "text/plain");
            return;
        }
        res.set_content(body, "application/xml");
    });

    if (service.port == 0) {
        service.port = server->bind_to_any_port("127.0.0.1");
        if (service.port <= 0)
            throw Error("service '" + service.name + "': cannot bind an ephemeral port");
    } else if (!server->bind_to_port("127.0.0.1", service.port)) {
        throw Error("service '" + service.name + "': cannot bind port " + std::to_string(service.port));
    }
    auto* raw = server.get();
    running.push_back({std::move(server), std::thread([raw] { raw->listen_after_bind(); })});
    raw->wait_until_ready();
}

void Grid::Impl::stop()
{
    {
        std::lock_guard lock(stop_mutex);
        stopping = true;
    }
    stop_cv.notify_all();
    for (auto& r : running)
        r.server->stop();
    for (auto& r : running)
        if (r.thread.joinable())
            r.thread.join();
    running.clear();
}

Grid::Grid(Scenario scenario) : impl_(std::make_unique<Impl>())
{
    impl_->scenario = std::move(scenario);
    try {
        for (auto& service : impl_->scenario.services)
            impl_->serve(service);
    } catch (...) {
        impl_->stop();
        throw;
    }
}

Grid::~Grid()
{
    impl_->stop();
}

void Grid::stop()
{
    impl_->stop();
}

const Scenario& Grid::scenario() const
{
    return impl_->scenario;
}

int Grid::port(std::string_view name) const
{
    for (const auto& s : impl_->scenario.services)
        if (s.name == name)
            return s.port;
    throw NotFoundError("no service named '" + std::string(name) + "'");
}

std::string Grid::url(std::string_view name) const
{
    return "http://127.0.0.1:" + std::to_string(port(name)) + "/info";
}

}  // namespace gridmap::simgrid
