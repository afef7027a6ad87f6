// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

namespace ultrachat {

struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds base_delay{1000};
    double factor = 2.0;
    double jitter = 0.2;
};

/// 408, 429 and 5xx are transient; other 4xx are not.
bool is_retryable_status(int status);

/// Delay before retry number `retry` (0-based): base * factor^retry, scaled by
/// 1 + jitter * (2u - 1) for u in [0, 1).
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry, double u);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

Sleeper real_sleeper();

/// Runs `attempt` until it succeeds, it throws a non-retryable BackendError, or
/// the budget is spent. The final BackendError names the number of attempts.
std::string call_with_retry(const RetryPolicy& policy, const std::function<std::string()>& attempt,
                            const Sleeper& sleep, std::uint64_t jitter_seed);

} // namespace ultrachat
