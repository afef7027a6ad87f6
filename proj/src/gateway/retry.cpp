// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/gateway/retry.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/rng.hpp"

#include <fmt/format.h>

#include <cmath>
#include <thread>

namespace ultrachat {

bool is_retryable_status(int status)
{
    return status == 408 || status == 429 || (status >= 500 && status <= 599);
}

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry, double u)
{
    const double base = static_cast<double>(policy.base_delay.count()) * std::pow(policy.factor, retry);
    const double scaled = base * (1.0 + policy.jitter * (2.0 * u - 1.0));
    return std::chrono::milliseconds(static_cast<long long>(std::llround(std::max(0.0, scaled))));
}

Sleeper real_sleeper()
{
    return [](std::chrono::milliseconds delay) { std::this_thread::sleep_for(delay); };
}

std::string call_with_retry(const RetryPolicy& policy, const std::function<std::string()>& attempt,
                            const Sleeper& sleep, std::uint64_t jitter_seed)
{
    if (policy.max_attempts < 1) {
        throw PreconditionError("retry policy needs at least one attempt");
    }
    Rng rng(jitter_seed);
    for (int made = 1;; ++made) {
        try {
            return attempt();
        } catch (const BackendError& error) {
            if (!error.retryable()) {
                throw BackendError(fmt::format("{} (after {} attempt{})", error.what(), made, made == 1 ? "" : "s"),
                                   made, false);
            }
            if (made >= policy.max_attempts) {
                throw BackendError(fmt::format("giving up after {} attempts: {}", made, error.what()), made, true);
            }
            sleep(backoff_delay(policy, made - 1, rng.uniform()));
        }
    }
}

} // namespace ultrachat
