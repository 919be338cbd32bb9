// simgrid: serve mock grid information services described by a scenario.

#include "gridmap/simgrid/simgrid.hpp"
#include "shutdown.hpp"

#include "CLI11.hpp"

#include <condition_variable>
#include <iostream>
#include <mutex>

using namespace gridmap;

int main(int argc, char** argv)
{
    std::string scenario_path;
    CLI::App app{"Simulated grid information services"};
    app.require_subcommand(1);
    auto* serve = app.add_subcommand("serve", "Serve every service of SCENARIO until interrupted");
    serve->add_option("scenario", scenario_path, "scenario.json")->required();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    tools::ShutdownSignals signals;
    try {
        simgrid::Grid grid(simgrid::load_scenario(scenario_path));
        // Bound ports, so callers can use port 0 in the scenario.
        std::cout << simgrid::to_json(grid.scenario()).dump() << std::endl;

        std::mutex mutex;
        std::condition_variable cv;
        bool done = false;
        signals.on_signal([&] {
            std::lock_guard lock(mutex);
            done = true;
            cv.notify_all();
        });
        std::unique_lock lock(mutex);
        cv.wait(lock, [&] { return done; });
        grid.stop();
    } catch (const std::exception& e) {
        signals.disarm();
        std::cerr << "simgrid: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
