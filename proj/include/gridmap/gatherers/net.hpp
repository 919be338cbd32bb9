#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace gridmap::net {

using Clock = std::chrono::steady_clock;

class NetError : public std::runtime_error {
public:
    enum class Kind { Connect, Timeout, Protocol };

    NetError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Owning file descriptor.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket();
    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept;

    int fd() const noexcept { return fd_; }
    explicit operator bool() const noexcept { return fd_ >= 0; }

private:
    int fd_ = -1;
};

/// Non-blocking connect bounded by `deadline`. Name resolution uses the
/// system resolver and is not covered by the deadline.
Socket connect_tcp(const std::string& host, int port, Clock::time_point deadline);

struct Url {
    std::string host;
    int port = 80;
    std::string target = "/";
};

/// http://host[:port][/path]. Throws std::invalid_argument.
Url parse_http_url(std::string_view text);

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// One GET over a fresh connection, everything (connect, send, headers and
/// body) bounded by the single `deadline`.
HttpResponse http_get(const Url& url, Clock::time_point deadline, std::size_t max_body = 4u << 20);

}  // namespace gridmap::net
