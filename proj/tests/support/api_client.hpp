#pragma once

#include "json.hpp"

#include <memory>
#include <string>

namespace httplib {
class Client;
}

namespace support {

struct Reply {
    int status = 0;
    std::string body;
    std::string content_type;

    nlohmann::json json() const { return nlohmann::json::parse(body); }
};

/// Blocking JSON client for the portal API on 127.0.0.1.
class ApiClient {
public:
    explicit ApiClient(int port);
    ~ApiClient();

    Reply get(const std::string& path);
    Reply search(const std::string& q);
    Reply post(const std::string& path, const std::string& body);
    Reply put(const std::string& path, const std::string& body);
    Reply del(const std::string& path);

private:
    std::unique_ptr<httplib::Client> client_;
};

/// The body is exactly {"http_status": status, "code": <string>, "message": <string>}.
bool is_api_error(const Reply& reply, int status);

}  // namespace support
