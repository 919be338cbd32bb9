#pragma once

#include "gridmap/core/store.hpp"
#include "gridmap/gatherers/gatherer.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

namespace gridmap {

struct MonitorConfig {
    std::chrono::seconds interval{30};
    std::chrono::milliseconds timeout{10000};
    int max_concurrency = 16;
    bool once = false;
};

/// Throws ValidationError unless interval >= 1 s, timeout >= 1 ms and
/// max_concurrency >= 1.
void validate(const MonitorConfig& config);

enum class OutcomeKind { Gathered, Failed, Skipped };

/// Gathered -> UP, Failed -> DOWN, Skipped -> UNKNOWN.
ResourceStatus derive_status(OutcomeKind kind);

struct Outcome {
    std::string resource_id;
    ResourceStatus status = ResourceStatus::Unknown;
    std::int64_t duration_ms = 0;
    std::optional<std::string> error;
};

struct CycleReport {
    Timestamp started_at{};
    Timestamp finished_at{};
    std::vector<Outcome> outcomes;  // state order, enabled resources only
};

nlohmann::json to_json(const CycleReport& report);

/// One pass over the enabled resources of the stored state. Gathers run on
/// at most max_concurrency worker threads; each outcome is recorded as it
/// completes. Unconfigured and unregistered types are recorded as UNKNOWN
/// without a gather. A stop request lets in-flight gathers finish and leaves
/// unstarted resources unrecorded (reported as UNKNOWN "cycle interrupted").
///
/// Throws StoreError if the state cannot be read.
CycleReport run_cycle(Store& store, const GathererRegistry& registry, const MonitorConfig& config,
                      std::stop_token stop = {});

/// Runs cycles start-to-start every interval until `stop` is requested
/// (or after one cycle with config.once). A cycle that overruns is followed
/// immediately by the next. Store errors are passed to on_error and the
/// loop carries on.
void run_loop(Store& store, const GathererRegistry& registry, const MonitorConfig& config, std::stop_token stop,
              const std::function<void(const CycleReport&)>& on_report,
              const std::function<void(const std::string&)>& on_error = {});

}  // namespace gridmap
