#pragma once

#include <deque>
#include <mutex>
#include <string>
#include <vector>

#include "cha/error.hpp"
#include "cha/planner/lm.hpp"

namespace cha::test {

/// Hands out queued completions in order and records every request.
class QueueLm final : public LmBackend {
public:
    QueueLm() = default;
    explicit QueueLm(std::vector<std::string> replies) : replies_(replies.begin(), replies.end()) {}

    void push(std::string reply) {
        std::lock_guard lock(mutex_);
        replies_.push_back(std::move(reply));
    }
    std::string complete(const LmRequest& request) override {
        std::lock_guard lock(mutex_);
        requests_.push_back(request);
        if (replies_.empty()) throw Error(Errc::backend_error, "queue exhausted");
        std::string r = std::move(replies_.front());
        replies_.pop_front();
        return r;
    }
    std::vector<LmRequest> requests() const {
        std::lock_guard lock(mutex_);
        return requests_;
    }

private:
    mutable std::mutex mutex_;
    std::deque<std::string> replies_;
    std::vector<LmRequest> requests_;
};

}  // namespace cha::test
