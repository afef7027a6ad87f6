// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/gateway/rate_limiter.hpp"

#include "ultrachat/core/errors.hpp"

#include <algorithm>
#include <iterator>
#include <thread>

namespace ultrachat {

namespace {
constexpr Clock::duration kWindow = std::chrono::seconds(60);
}

Clock::duration SteadyClock::now()
{
    return std::chrono::duration_cast<duration>(std::chrono::steady_clock::now().time_since_epoch());
}

void SteadyClock::sleep_until(duration when)
{
    const auto delta = when - now();
    if (delta > duration::zero()) {
        std::this_thread::sleep_for(delta);
    }
}

Clock::duration VirtualClock::now()
{
    std::lock_guard lock(mutex_);
    return now_;
}

void VirtualClock::sleep_until(duration when)
{
    std::unique_lock lock(mutex_);
    if (now_ >= when) {
        return;
    }
    const auto entry = deadlines_.insert(when);
    changed_.notify_all();
    changed_.wait(lock, [&] { return now_ >= when; });
    deadlines_.erase(entry);
    changed_.notify_all();
}

void VirtualClock::advance(duration by)
{
    std::lock_guard lock(mutex_);
    now_ += by;
    changed_.notify_all();
}

std::size_t VirtualClock::blocked_locked() const
{
    return static_cast<std::size_t>(std::distance(deadlines_.upper_bound(now_), deadlines_.end()));
}

std::size_t VirtualClock::sleepers()
{
    std::lock_guard lock(mutex_);
    return blocked_locked();
}

void VirtualClock::wait_for_sleepers(std::size_t count)
{
    std::unique_lock lock(mutex_);
    changed_.wait(lock, [&] { return blocked_locked() >= count; });
}

RateLimiter::RateLimiter(std::size_t requests_per_minute, std::shared_ptr<Clock> clock)
    : rpm_(requests_per_minute), clock_(std::move(clock))
{
    if (rpm_ == 0) {
        throw PreconditionError("requests_per_minute must be at least 1");
    }
    if (!clock_) {
        throw PreconditionError("rate limiter needs a clock");
    }
}

void RateLimiter::acquire()
{
    Clock::duration slot;
    {
        std::lock_guard lock(mutex_);
        slot = clock_->now();
        if (!granted_.empty()) {
            slot = std::max(slot, granted_.back());
        }
        if (granted_.size() >= rpm_) {
            slot = std::max(slot, granted_[granted_.size() - rpm_] + kWindow);
        }
        granted_.push_back(slot);
        while (granted_.size() > rpm_) {
            granted_.pop_front();
        }
    }
    clock_->sleep_until(slot);
}

RateLimitedBackend::RateLimitedBackend(BackendPtr inner, std::size_t requests_per_minute, std::shared_ptr<Clock> clock)
    : RateLimitedBackend(std::move(inner), std::make_shared<RateLimiter>(requests_per_minute, std::move(clock)))
{
}

RateLimitedBackend::RateLimitedBackend(BackendPtr inner, std::shared_ptr<RateLimiter> limiter)
    : inner_(std::move(inner)), limiter_(std::move(limiter))
{
    if (!inner_ || !limiter_) {
        throw PreconditionError("rate-limited backend needs an inner backend and a limiter");
    }
}

std::string RateLimitedBackend::do_complete(const ChatRequest& request)
{
    limiter_->acquire();
    return inner_->complete(request);
}

std::vector<Embedding> RateLimitedBackend::do_embed(const std::vector<std::string>& texts)
{
    limiter_->acquire();
    return inner_->embed(texts);
}

BackendPtr with_rate_limit(BackendPtr inner, std::size_t requests_per_minute, std::shared_ptr<Clock> clock)
{
    return std::make_shared<RateLimitedBackend>(std::move(inner), requests_per_minute, std::move(clock));
}

} // namespace ultrachat
