#pragma once

#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"

namespace cha::test {

struct CapturedRequest {
    std::string method;
    std::string path;
    std::string body;
    std::multimap<std::string, std::string> params;
};

/// In-process HTTP server on a free loopback port that records every request
/// and answers with a caller-supplied handler.
class StubServer {
public:
    using Handler = std::function<void(const httplib::Request&, httplib::Response&, int call_index)>;

    explicit StubServer(Handler handler) : handler_(std::move(handler)) {
        auto record = [this](const httplib::Request& req, httplib::Response& res) {
            int index = 0;
            {
                std::lock_guard lock(mutex_);
                CapturedRequest c{req.method, req.path, req.body, {}};
                for (const auto& [k, v] : req.params) c.params.emplace(k, v);
                requests_.push_back(std::move(c));
                index = static_cast<int>(requests_.size()) - 1;
            }
            handler_(req, res, index);
        };
        server_.Get(".*", record);
        server_.Post(".*", record);
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    int port() const { return port_; }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    std::vector<CapturedRequest> requests() const {
        std::lock_guard lock(mutex_);
        return requests_;
    }

private:
    Handler handler_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    mutable std::mutex mutex_;
    std::vector<CapturedRequest> requests_;
};

}  // namespace cha::test
