#pragma once

#include <atomic>
#include <string>
#include <thread>
#include <vector>

namespace support {

/// Loopback listener that never accepts; the kernel still completes handshakes.
class Listener {
public:
    explicit Listener(int backlog = 64);
    ~Listener();
    Listener(const Listener&) = delete;
    Listener& operator=(const Listener&) = delete;

    int port() const noexcept { return port_; }
    int fd() const noexcept { return fd_; }

private:
    int fd_ = -1;
    int port_ = 0;
};

/// A loopback port with nothing listening on it.
int closed_port();

/// A listener whose accept queue is full, so further connects hang in
/// SYN_SENT. ok() is false if the kernel would not stall.
class StalledListener {
public:
    StalledListener();
    ~StalledListener();

    bool ok() const noexcept { return ok_; }
    int port() const noexcept { return listener_.port(); }

private:
    Listener listener_{0};
    std::vector<int> fillers_;
    bool ok_ = false;
};

/// Answers every connection with a fixed byte string and closes it.
class ScriptedServer {
public:
    explicit ScriptedServer(std::string response);
    ~ScriptedServer();

    int port() const noexcept { return listener_.port(); }

private:
    Listener listener_;
    std::string response_;
    std::atomic<bool> stop_{false};
    std::thread thread_;
};

}  // namespace support
