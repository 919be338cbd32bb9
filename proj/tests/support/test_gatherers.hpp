#pragma once

#include "gridmap/gatherers/gatherer.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace support {

/// Sleeps, then reports UP with a fixed payload. Tracks how many calls are
/// inside gather() at once and when each call ran.
class CountingGatherer final : public gridmap::Gatherer {
public:
    explicit CountingGatherer(std::chrono::milliseconds work, std::string payload = "<ok/>")
        : work_(work), payload_(std::move(payload))
    {
    }

    gridmap::ResourceInfo gather(const gridmap::Resource& r, std::chrono::milliseconds) const override
    {
        auto entered = ++in_flight_;
        auto peak = peak_.load();
        while (entered > peak && !peak_.compare_exchange_weak(peak, entered)) {
        }
        auto start = std::chrono::steady_clock::now();
        std::this_thread::sleep_for(work_);
        {
            std::lock_guard lock(mutex_);
            spans_.push_back({start, std::chrono::steady_clock::now()});
        }
        --in_flight_;
        ++calls_;
        return gridmap::up_info(r, payload_, work_.count());
    }

    int peak() const { return peak_; }
    int calls() const { return calls_; }

    struct Span {
        std::chrono::steady_clock::time_point start, end;
    };
    std::vector<Span> spans() const
    {
        std::lock_guard lock(mutex_);
        return spans_;
    }

private:
    std::chrono::milliseconds work_;
    std::string payload_;
    mutable std::atomic<int> in_flight_{0};
    mutable std::atomic<int> peak_{0};
    mutable std::atomic<int> calls_{0};
    mutable std::mutex mutex_;
    mutable std::vector<Span> spans_;
};

/// Breaks the gatherer contract by throwing.
class ThrowingGatherer final : public gridmap::Gatherer {
public:
    gridmap::ResourceInfo gather(const gridmap::Resource&, std::chrono::milliseconds) const override
    {
        throw std::logic_error("probe exploded");
    }
};

/// Breaks the contract by returning whatever it was given.
class RawGatherer final : public gridmap::Gatherer {
public:
    explicit RawGatherer(gridmap::ResourceInfo info) : info_(std::move(info)) {}
    gridmap::ResourceInfo gather(const gridmap::Resource&, std::chrono::milliseconds) const override { return info_; }

private:
    gridmap::ResourceInfo info_;
};

}  // namespace support
