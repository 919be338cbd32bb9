#include "gridmap/gatherers/net.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <memory>
#include <optional>

namespace gridmap::net {

namespace {

int remaining_ms(Clock::time_point deadline)
{
    auto left = std::chrono::ceil<std::chrono::milliseconds>(deadline - Clock::now()).count();
    return static_cast<int>(std::clamp<long long>(left, 0, 1 << 30));
}

// Waits for `events` on fd; false on deadline.
bool wait_for(int fd, short events, Clock::time_point deadline)
{
    for (;;) {
        pollfd p{fd, events, 0};
        int ms = remaining_ms(deadline);
        int rc = ::poll(&p, 1, ms);
        if (rc > 0)
            return true;
        if (rc == 0)
            return false;
        if (errno != EINTR)
            throw NetError(NetError::Kind::Connect, std::string("poll: ") + std::strerror(errno));
    }
}

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::optional<std::size_t> parse_size(std::string_view s, int base = 10)
{
    std::size_t v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (r.ec != std::errc() || r.ptr == s.data())
        return std::nullopt;
    return v;
}

struct Head {
    int status = 0;
    std::optional<std::size_t> content_length;
    bool chunked = false;
    std::size_t body_offset = 0;
};

std::optional<Head> parse_head(const std::string& buf)
{
    auto end = buf.find("\r\n\r\n");
    if (end == std::string::npos)
        return std::nullopt;
    Head head;
    head.body_offset = end + 4;
    std::string_view view(buf.data(), end);
    auto eol = view.find("\r\n");
    auto status_line = view.substr(0, eol);
    if (status_line.substr(0, 5) != "HTTP/" || status_line.size() < 12)
        throw NetError(NetError::Kind::Protocol, "malformed status line");
    auto code = parse_size(status_line.substr(9, 3));
    if (!code)
        throw NetError(NetError::Kind::Protocol, "malformed status line");
    head.status = static_cast<int>(*code);

    while (eol != std::string_view::npos) {
        view.remove_prefix(eol + 2);
        eol = view.find("\r\n");
        auto line = view.substr(0, eol);
        auto colon = line.find(':');
        if (colon == std::string_view::npos)
            continue;
        auto name = lower(line.substr(0, colon));
        auto value = line.substr(colon + 1);
        while (!value.empty() && value.front() == ' ')
            value.remove_prefix(1);
        if (name == "content-length")
            head.content_length = parse_size(value);
        else if (name == "transfer-encoding" && lower(value).find("chunked") != std::string::npos)
            head.chunked = true;
    }
    return head;
}

// Decodes a complete chunked body; nullopt while more bytes are needed.
std::optional<std::string> decode_chunked(std::string_view in)
{
    std::string out;
    for (;;) {
        auto eol = in.find("\r\n");
        if (eol == std::string_view::npos)
            return std::nullopt;
        auto size = parse_size(in.substr(0, eol), 16);
        if (!size)
            throw NetError(NetError::Kind::Protocol, "malformed chunk size");
        in.remove_prefix(eol + 2);
        if (*size == 0)
            return out;
        if (in.size() < *size + 2)
            return std::nullopt;
        out.append(in.substr(0, *size));
        in.remove_prefix(*size + 2);
    }
}

}  // namespace

Socket::~Socket()
{
    if (fd_ >= 0)
        ::close(fd_);
}

Socket& Socket::operator=(Socket&& other) noexcept
{
    if (this != &other) {
        if (fd_ >= 0)
            ::close(fd_);
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

Socket connect_tcp(const std::string& host, int port, Clock::time_point deadline)
{
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* list = nullptr;
    auto service = std::to_string(port);
    int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &list);
    if (rc != 0)
        throw NetError(NetError::Kind::Connect, "cannot resolve " + host + ": " + ::gai_strerror(rc));
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(list, &::freeaddrinfo);

    std::string last_error = "no usable address";
    for (auto* ai = list; ai; ai = ai->ai_next) {
        Socket s(::socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK | SOCK_CLOEXEC, ai->ai_protocol));
        if (!s) {
            last_error = std::strerror(errno);
            continue;
        }
        if (::connect(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0)
            return s;
        if (errno != EINPROGRESS) {
            last_error = std::strerror(errno);
            continue;
        }
        if (!wait_for(s.fd(), POLLOUT, deadline))
            throw NetError(NetError::Kind::Timeout, "connect to " + host + ":" + service + " did not complete");
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
        if (err == 0)
            return s;
        last_error = std::strerror(err);
    }
    throw NetError(NetError::Kind::Connect, last_error);
}

Url parse_http_url(std::string_view text)
{
    constexpr std::string_view scheme = "http://";
    if (text.substr(0, scheme.size()) != scheme)
        throw std::invalid_argument("only http:// URLs are supported");
    text.remove_prefix(scheme.size());
    Url url;
    auto slash = text.find('/');
    auto authority = text.substr(0, slash);
    if (slash != std::string_view::npos)
        url.target = std::string(text.substr(slash));
    auto colon = authority.rfind(':');
    if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
        auto port = parse_size(authority.substr(colon + 1));
        if (!port || *port < 1 || *port > 65535 || colon + 1 + std::to_string(*port).size() != authority.size())
            throw std::invalid_argument("bad port in URL");
        url.port = static_cast<int>(*port);
        authority = authority.substr(0, colon);
    }
    if (authority.empty())
        throw std::invalid_argument("URL has no host");
    url.host = std::string(authority);
    return url;
}

HttpResponse http_get(const Url& url, Clock::time_point deadline, std::size_t max_body)
{
    auto s = connect_tcp(url.host, url.port, deadline);

    std::string request = "GET " + url.target + " HTTP/1.1\r\nHost: " + url.host + ":" + std::to_string(url.port) +
                          "\r\nAccept: application/xml, text/xml\r\nConnection: close\r\n\r\n";
    std::string_view out = request;
    while (!out.empty()) {
        auto n = ::send(s.fd(), out.data(), out.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EAGAIN || errno == EINTR) {
                if (!wait_for(s.fd(), POLLOUT, deadline))
                    throw NetError(NetError::Kind::Timeout, "request not sent");
                continue;
            }
            throw NetError(NetError::Kind::Connect, std::string("send: ") + std::strerror(errno));
        }
        out.remove_prefix(static_cast<std::size_t>(n));
    }

    std::string buf;
    std::optional<Head> head;
    char chunk[16384];
    for (;;) {
        if (head) {
            std::string_view body(buf.data() + head->body_offset, buf.size() - head->body_offset);
            if (head->chunked) {
                if (auto decoded = decode_chunked(body))
                    return {head->status, std::move(*decoded)};
            } else if (head->content_length && body.size() >= *head->content_length) {
                return {head->status, std::string(body.substr(0, *head->content_length))};
            }
        }
        if (!wait_for(s.fd(), POLLIN, deadline))
            throw NetError(NetError::Kind::Timeout, "response incomplete");
        auto n = ::recv(s.fd(), chunk, sizeof chunk, 0);
        if (n < 0) {
            if (errno == EAGAIN || errno == EINTR)
                continue;
            throw NetError(NetError::Kind::Connect, std::string("recv: ") + std::strerror(errno));
        }
        if (n == 0)
            break;
        buf.append(chunk, static_cast<std::size_t>(n));
        if (buf.size() > max_body + 65536)
            throw NetError(NetError::Kind::Protocol, "response larger than " + std::to_string(max_body) + " bytes");
        if (!head)
            head = parse_head(buf);
    }

    if (!head)
        throw NetError(NetError::Kind::Protocol, "connection closed before response headers");
    std::string_view body(buf.data() + head->body_offset, buf.size() - head->body_offset);
    if (head->chunked)
        throw NetError(NetError::Kind::Protocol, "connection closed inside chunked body");
    if (head->content_length && body.size() < *head->content_length)
        throw NetError(NetError::Kind::Protocol, "connection closed after " + std::to_string(body.size()) + " of " +
                                                     std::to_string(*head->content_length) + " body bytes");
    return {head->status, std::string(body)};
}

}  // namespace gridmap::net
