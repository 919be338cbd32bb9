#pragma once

#include "gridmap/core/errors.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace gridmap::simgrid {

enum class Schema { Cluster, Storage, Instrument };
enum class Mode { Healthy, Slow, Flaky, Down, Malformed };

std::string_view to_string(Schema schema);
std::string_view to_string(Mode mode);

/// Root element name of a schema's payload.
std::string_view root_element(Schema schema);

struct MockService {
    std::string name;
    int port = 0;  // 0 picks an ephemeral port
    Schema schema = Schema::Cluster;
    Mode mode = Mode::Healthy;
    int delay_ms = 0;             // slow
    double fail_probability = 0;  // flaky
    std::uint64_t seed = 0;
};

struct Scenario {
    std::vector<MockService> services;
};

/// Throws ValidationError: duplicate non-zero ports, unknown schema or mode,
/// probability outside [0,1], negative delay.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& scenario);

/// The healthy payload of a service; a function of schema and seed only.
std::string payload(const MockService& service);

/// A healthy payload cut short so that it never parses.
std::string malformed_payload(const MockService& service);

/// Per-request success/failure sequence of a flaky service: request i fails
/// when the i-th draw of mt19937_64(seed) falls below fail_probability.
class FlakySequence {
public:
    FlakySequence(std::uint64_t seed, double fail_probability);
    bool next_fails();

private:
    struct State;
    std::shared_ptr<State> state_;
};

/// Runs every service of a scenario on 127.0.0.1 until stopped. Each service
/// answers GET /info. Down services have a port with nothing listening.
class Grid {
public:
    explicit Grid(Scenario scenario);
    ~Grid();

    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    /// Scenario with ephemeral ports replaced by the bound ones.
    const Scenario& scenario() const;
    int port(std::string_view name) const;
    std::string url(std::string_view name) const;

    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace gridmap::simgrid
