// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/gateway/chat_backend.hpp"

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>
#include <set>

namespace ultrachat {

/// Time source for throttling; durations are measured from an arbitrary origin.
class Clock {
public:
    using duration = std::chrono::nanoseconds;

    virtual ~Clock() = default;
    virtual duration now() = 0;
    virtual void sleep_until(duration when) = 0;
};

class SteadyClock final : public Clock {
public:
    duration now() override;
    void sleep_until(duration when) override;
};

/// Manually advanced clock. Sleepers block until advance() reaches their deadline.
class VirtualClock final : public Clock {
public:
    duration now() override;
    void sleep_until(duration when) override;

    void advance(duration by);
    /// Threads blocked in sleep_until whose deadline is still ahead. A thread
    /// released by advance() stops counting before it actually wakes.
    std::size_t sleepers();
    /// Blocks the caller until at least `count` threads are sleeping.
    void wait_for_sleepers(std::size_t count);

private:
    std::size_t blocked_locked() const;

    std::mutex mutex_;
    std::condition_variable changed_;
    duration now_{0};
    std::multiset<duration> deadlines_;
};

/// Sliding-window limiter: no 60-second window sees more than rpm forwarded
/// requests. Each caller reserves the earliest slot that keeps the window
/// valid and sleeps until it; nobody is dropped.
class RateLimiter {
public:
    RateLimiter(std::size_t requests_per_minute, std::shared_ptr<Clock> clock);

    /// Blocks until the caller may proceed.
    void acquire();
    Clock& clock() { return *clock_; }

private:
    std::size_t rpm_;
    std::shared_ptr<Clock> clock_;
    std::mutex mutex_;
    std::deque<Clock::duration> granted_;
};

class RateLimitedBackend final : public ChatBackend {
public:
    RateLimitedBackend(BackendPtr inner, std::size_t requests_per_minute,
                       std::shared_ptr<Clock> clock = std::make_shared<SteadyClock>());
    /// Several backends may share one limiter when they draw on one quota.
    RateLimitedBackend(BackendPtr inner, std::shared_ptr<RateLimiter> limiter);

    std::string fingerprint() const override { return inner_->fingerprint(); }

protected:
    std::string do_complete(const ChatRequest& request) override;
    std::vector<Embedding> do_embed(const std::vector<std::string>& texts) override;

private:
    BackendPtr inner_;
    std::shared_ptr<RateLimiter> limiter_;
};

/// Throws PreconditionError when rpm is 0.
BackendPtr with_rate_limit(BackendPtr inner, std::size_t requests_per_minute,
                           std::shared_ptr<Clock> clock = std::make_shared<SteadyClock>());

} // namespace ultrachat
