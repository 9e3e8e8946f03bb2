#pragma once

#include "assembly/service/store.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace assembly::service {

// JSON API over a Store. Errors come back as {"error": name, "message": ...}.
class HttpService {
public:
    explicit HttpService(Store& store);
    ~HttpService();

    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    // Blocks until stop(). Returns false when the address cannot be bound.
    bool listen(const std::string& host, int port);
    // Binds to a free port and returns it, or -1.
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    Store& Data;
    std::unique_ptr<httplib::Server> Server;
};

// HTTP status for a domain error name.
int status_for_error(const std::string& name);

} // namespace assembly::service
