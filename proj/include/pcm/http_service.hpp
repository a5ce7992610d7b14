#pragma once

#include <atomic>
#include <memory>
#include <string>

#include "pcm/service.hpp"

namespace httplib {
class Server;
}

namespace pcm {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::string cors_origin = "*";
    std::size_t default_k = 3;
};

// JSON API over a Store:
//   GET  /healthz
//   GET  /articles
//   GET  /articles/{id}
//   GET  /articles/{id}/paragraphs/{i}/comments?k=3
//   GET  /articles/{id}/comments/articlewide
//   POST /articles/{id}/comments  {"author": ..., "text": ...}
class HttpService {
public:
    HttpService(Store &store, const Scorer &scorer, ServiceConfig config = {});
    ~HttpService();

    HttpService(const HttpService &) = delete;
    HttpService &operator=(const HttpService &) = delete;

    // Binds the socket and returns the bound port. Throws Error(Io) on failure.
    int bind();
    // Serves until stop(); bind() first.
    void run();
    void stop();
    void wait_until_ready() const;

private:
    void routes();

    Store &store_;
    const Scorer &scorer_;
    ServiceConfig config_;
    std::unique_ptr<httplib::Server> server_;
    std::atomic<bool> stopped_{false};
};

}  // namespace pcm
