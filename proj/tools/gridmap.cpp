// gridmap: control CLI for a portal state directory.

#include "gridmap/core/errors.hpp"
#include "gridmap/core/portal.hpp"
#include "gridmap/core/store.hpp"
#include "gridmap/monitor/monitor.hpp"
#include "gridmap/server/server.hpp"
#include "shutdown.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace gridmap;

namespace {

struct Options {
    std::string state_dir = "state";
    std::string gatherers = GRIDMAP_DEFAULT_GATHERERS;

    std::string listen{kDefaultListen};
    std::string static_dir;
    int interval_s = 30;
    int timeout_ms = 10000;
    int max_concurrency = 16;
    bool once = false;

    std::string hostname;
    std::string id;
    std::vector<std::string> assignments;
    std::string import_file;
};

GathererRegistry registry_from(const Options& o)
{
    auto registry = load_registry(o.gatherers);
    for (const auto& w : registry.warnings())
        std::cerr << "gridmap: warning: " << w << "\n";
    return registry;
}

std::unique_ptr<Store> open_store(const Options& o)
{
    auto store = std::make_unique<Store>(o.state_dir);
    store->initialize();
    return store;
}

int serve(const Options& o)
{
    tools::ShutdownSignals signals;
    auto store_ptr = open_store(o);
    auto& store = *store_ptr;
    auto registry = registry_from(o);
    ServerOptions options;
    if (!o.static_dir.empty())
        options.static_dir = o.static_dir;
    options.interval = std::chrono::seconds(o.interval_s);
    ApiServer server(store, registry, options);
    auto [host, port] = parse_listen(o.listen);
    int bound = server.bind(host, port);
    std::cerr << "gridmap: serving " << o.state_dir << " on http://" << host << ":" << bound << "\n";
    signals.on_signal([&server] { server.stop(); });
    server.run();
    signals.disarm();
    return 0;
}

int monitor(const Options& o)
{
    tools::ShutdownSignals signals;
    auto store_ptr = open_store(o);
    auto& store = *store_ptr;
    auto registry = registry_from(o);
    MonitorConfig config;
    config.interval = std::chrono::seconds(o.interval_s);
    config.timeout = std::chrono::milliseconds(o.timeout_ms);
    config.max_concurrency = o.max_concurrency;
    config.once = o.once;
    validate(config);

    std::stop_source stop;
    signals.on_signal([&stop] { stop.request_stop(); });
    bool failed = false;
    run_loop(
        store, registry, config, stop.get_token(),
        [](const CycleReport& report) { std::cout << to_json(report).dump() << std::endl; },
        [&failed](const std::string& error) {
            failed = true;
            std::cerr << "gridmap: " << error << std::endl;
        });
    signals.disarm();
    return o.once && failed ? 1 : 0;
}

int list(const Options& o)
{
    auto store_ptr = open_store(o);
    auto& store = *store_ptr;
    auto state = store.load();
    auto infos = store.infos_for(state);
    for (const auto& r : state.resources) {
        auto it = infos.find(r.id);
        auto status = it == infos.end() ? ResourceStatus::Unknown : it->second.status;
        std::cout << r.id << "\t" << r.hostname << "\t" << r.type << "\t" << to_string(status) << "\t"
                  << (r.enabled ? "enabled" : "disabled") << "\t" << r.label << "\n";
    }
    return 0;
}

int add(const Options& o)
{
    auto store_ptr = open_store(o);
    auto& store = *store_ptr;
    Resource added;
    store.modify([&](PortalState& state) {
        auto [next, r] = add_resource(std::move(state), o.hostname);
        state = std::move(next);
        added = r;
    });
    std::cout << added.id << "\n";
    return 0;
}

int remove(const Options& o)
{
    auto store_ptr = open_store(o);
    auto& store = *store_ptr;
    store.modify([&](PortalState& state) { state = delete_resource(std::move(state), o.id, store); });
    return 0;
}

int set(const Options& o)
{
    auto store_ptr = open_store(o);
    auto& store = *store_ptr;
    auto patch = patch_from_assignments(o.assignments);
    Resource updated;
    store.modify([&](PortalState& state) {
        state = update_resource(std::move(state), o.id, patch);
        updated = *state.find(o.id);
    });
    std::cout << nlohmann::json(updated).dump() << "\n";
    return 0;
}

int export_state(const Options& o)
{
    auto store_ptr = open_store(o);
    auto& store = *store_ptr;
    std::cout << nlohmann::json(store.load()).dump(2) << "\n";
    return 0;
}

int import_state(const Options& o)
{
    std::string text;
    if (o.import_file == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        text = s.str();
    } else {
        std::ifstream in(o.import_file);
        if (!in)
            throw StoreError("cannot open " + o.import_file);
        std::ostringstream s;
        s << in.rdbuf();
        text = s.str();
    }
    PortalState state;
    try {
        state = nlohmann::json::parse(text).get<PortalState>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(o.import_file + " is not a portal document: " + e.what());
    }
    validate(state);
    auto store_ptr = open_store(o);
    auto& store = *store_ptr;
    store.save(state);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    Options o;
    CLI::App app{"Grid resource map: state, monitor and portal API"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.add_option("--state-dir", o.state_dir, "State directory (portal.json and state/)");
    app.add_option("--gatherers", o.gatherers, "Gatherer registry configuration (gatherers.json)");

    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
    serve_cmd->add_option("--listen", o.listen, "HOST:PORT");
    serve_cmd->add_option("--static", o.static_dir, "Directory of web UI assets served at /");
    serve_cmd->add_option("--interval", o.interval_s, "Monitor interval in seconds, for the stale flag")
        ->check(CLI::PositiveNumber);

    auto* monitor_cmd = app.add_subcommand("monitor", "Poll resources and record their state");
    monitor_cmd->add_flag("--once", o.once, "Run a single cycle and exit");
    monitor_cmd->add_option("--interval", o.interval_s, "Seconds between cycle starts")->check(CLI::PositiveNumber);
    monitor_cmd->add_option("--timeout", o.timeout_ms, "Per-resource timeout in milliseconds")
        ->check(CLI::PositiveNumber);
    monitor_cmd->add_option("--max-concurrency", o.max_concurrency, "Gathers in flight at once")
        ->check(CLI::PositiveNumber);

    app.add_subcommand("ls", "List resources");
    auto* add_cmd = app.add_subcommand("add", "Add a resource by hostname; prints its id");
    add_cmd->add_option("hostname", o.hostname)->required();
    auto* rm_cmd = app.add_subcommand("rm", "Remove a resource and its recorded state");
    rm_cmd->add_option("id", o.id)->required();
    auto* set_cmd = app.add_subcommand("set", "Change resource fields: key=value ...");
    set_cmd->add_option("id", o.id)->required();
    set_cmd->add_option("assignments", o.assignments)->required();
    app.add_subcommand("export", "Write portal.json to standard output");
    auto* import_cmd = app.add_subcommand("import", "Replace portal.json with FILE (- for stdin)");
    import_cmd->add_option("file", o.import_file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const auto& name = app.get_subcommands().front()->get_name();
        if (name == "serve")
            return serve(o);
        if (name == "monitor")
            return monitor(o);
        if (name == "ls")
            return list(o);
        if (name == "add")
            return add(o);
        if (name == "rm")
            return remove(o);
        if (name == "set")
            return set(o);
        if (name == "export")
            return export_state(o);
        return import_state(o);
    } catch (const std::exception& e) {
        std::cerr << "gridmap: error: " << e.what() << "\n";
        return 1;
    }
}
