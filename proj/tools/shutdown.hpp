#pragma once

#include <csignal>
#include <functional>
#include <pthread.h>
#include <thread>

namespace gridmap::tools {

/// Blocks SIGINT and SIGTERM for the whole process (construct before any
/// thread starts) and runs `handler` on a watcher thread when one arrives.
class ShutdownSignals {
public:
    ShutdownSignals()
    {
        sigemptyset(&set_);
        sigaddset(&set_, SIGINT);
        sigaddset(&set_, SIGTERM);
        pthread_sigmask(SIG_BLOCK, &set_, nullptr);
    }

    ~ShutdownSignals()
    {
        if (watcher_.joinable()) {
            pthread_kill(watcher_.native_handle(), SIGTERM);
            watcher_.join();
        }
    }

    void on_signal(std::function<void()> handler)
    {
        watcher_ = std::thread([this, handler = std::move(handler)] {
            int sig = 0;
            sigwait(&set_, &sig);
            if (!done_)
                handler();
        });
    }

    /// Call before destruction when the program ends on its own.
    void disarm() { done_ = true; }

private:
    sigset_t set_;
    std::thread watcher_;
    volatile bool done_ = false;
};

}  // namespace gridmap::tools
