#include "gridmap/monitor/monitor.hpp"

#include "gridmap/core/errors.hpp"
#include "gridmap/xml/document.hpp"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

namespace gridmap {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

ResourceInfo skipped_info(const Resource& r, std::string why)
{
    ResourceInfo info;
    info.resource_id = r.id;
    info.status = ResourceStatus::Unknown;
    info.gathered_at = now();
    info.error = std::move(why);
    return info;
}

// Runs the gatherer and forces the result to satisfy the info invariants
// whatever the gatherer did.
ResourceInfo guarded_gather(const Gatherer& gatherer, const Resource& r, std::chrono::milliseconds timeout)
{
    ResourceInfo info;
    try {
        info = gatherer.gather(r, timeout);
    } catch (const std::exception& e) {
        info = down_info(r, std::string("gatherer fault: ") + e.what());
    } catch (...) {
        info = down_info(r, "gatherer fault: unknown exception");
    }
    info.resource_id = r.id;
    info.gathered_at = now();
    switch (info.status) {
    case ResourceStatus::Up:
        if (!xml::is_well_formed(info.payload_xml))
            return down_info(r, "invalid payload: gatherer returned malformed XML", info.latency_ms);
        info.error.reset();
        break;
    case ResourceStatus::Down:
        if (!info.error || info.error->empty())
            info.error = "gatherer reported failure without a reason";
        break;
    case ResourceStatus::Unknown:
        if (!info.error || info.error->empty())
            info.error = "gatherer returned no status";
        break;
    }
    if (info.latency_ms < 0)
        info.latency_ms = 0;
    return info;
}

}  // namespace

void validate(const MonitorConfig& config)
{
    if (config.interval < std::chrono::seconds(1))
        throw ValidationError("interval must be at least 1 second");
    if (config.timeout < std::chrono::milliseconds(1))
        throw ValidationError("timeout must be at least 1 ms");
    if (config.max_concurrency < 1)
        throw ValidationError("max_concurrency must be at least 1");
}

ResourceStatus derive_status(OutcomeKind kind)
{
    switch (kind) {
    case OutcomeKind::Gathered:
        return ResourceStatus::Up;
    case OutcomeKind::Failed:
        return ResourceStatus::Down;
    case OutcomeKind::Skipped:
        break;
    }
    return ResourceStatus::Unknown;
}

json to_json(const CycleReport& report)
{
    json outcomes = json::array();
    for (const auto& o : report.outcomes) {
        json item = {{"id", o.resource_id}, {"status", to_string(o.status)}, {"duration_ms", o.duration_ms}};
        if (o.error)
            item["error"] = *o.error;
        outcomes.push_back(std::move(item));
    }
    return {{"started_at", format_timestamp(report.started_at)},
            {"finished_at", format_timestamp(report.finished_at)},
            {"outcomes", std::move(outcomes)}};
}

CycleReport run_cycle(Store& store, const GathererRegistry& registry, const MonitorConfig& config,
                      std::stop_token stop)
{
    validate(config);
    CycleReport report;
    report.started_at = now();
    auto state = store.load();

    struct Job {
        const Resource* resource;
        const Gatherer* gatherer;
        std::size_t slot;
    };
    std::vector<Job> jobs;
    for (const auto& r : state.resources) {
        if (!r.enabled)
            continue;
        std::size_t slot = report.outcomes.size();
        report.outcomes.push_back({r.id, ResourceStatus::Unknown, 0, std::nullopt});
        const Gatherer* gatherer = registry.lookup(r.type);
        if (gatherer) {
            jobs.push_back({&r, gatherer, slot});
            continue;
        }
        auto why = r.type == kUnconfiguredType ? std::string("type not configured")
                                               : "no gatherer registered for type '" + r.type + "'";
        auto& outcome = report.outcomes[slot];
        outcome.error = why;
        try {
            store.record_info(skipped_info(r, why));
        } catch (const std::exception& e) {
            outcome.error = why + "; not recorded: " + e.what();
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            if (stop.stop_requested())
                return;
            auto i = next.fetch_add(1);
            if (i >= jobs.size())
                return;
            const auto& job = jobs[i];
            auto start = Clock::now();
            auto info = guarded_gather(*job.gatherer, *job.resource, config.timeout);
            auto& outcome = report.outcomes[job.slot];
            outcome.duration_ms =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
            outcome.status = info.status;
            outcome.error = info.error;
            try {
                store.record_info(info);
            } catch (const std::exception& e) {
                outcome.status = ResourceStatus::Unknown;
                outcome.error = std::string("not recorded: ") + e.what();
            }
        }
    };

    auto workers = std::min<std::size_t>(static_cast<std::size_t>(config.max_concurrency), jobs.size());
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i)
            pool.emplace_back(worker);
    }

    for (std::size_t i = std::min(next.load(), jobs.size()); i < jobs.size(); ++i)
        report.outcomes[jobs[i].slot].error = "cycle interrupted before gather";
    report.finished_at = now();
    return report;
}

void run_loop(Store& store, const GathererRegistry& registry, const MonitorConfig& config, std::stop_token stop,
              const std::function<void(const CycleReport&)>& on_report,
              const std::function<void(const std::string&)>& on_error)
{
    validate(config);
    std::mutex mutex;
    std::condition_variable_any wake;
    auto next_start = Clock::now();
    while (!stop.stop_requested()) {
        next_start += config.interval;
        try {
            auto report = run_cycle(store, registry, config, stop);
            if (on_report)
                on_report(report);
        } catch (const std::exception& e) {
            if (on_error)
                on_error(std::string("cycle failed: ") + e.what());
        }
        if (config.once)
            return;
        auto t = Clock::now();
        if (next_start < t)
            next_start = t;
        std::unique_lock lock(mutex);
        wake.wait_until(lock, stop, next_start, [] { return false; });
    }
}

}  // namespace gridmap
