// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/gateway/backend_factory.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/gateway/cached_backend.hpp"
#include "ultrachat/gateway/http_backend.hpp"
#include "ultrachat/gateway/mock_backend.hpp"
#include "ultrachat/gateway/rate_limiter.hpp"

#include <fmt/format.h>

namespace ultrachat {

namespace {

BackendPtr wrap(BackendPtr backend, const BackendConfig& config, const std::shared_ptr<Clock>& clock)
{
    if (config.requests_per_minute > 0) {
        backend = with_rate_limit(std::move(backend), config.requests_per_minute, clock);
    }
    if (!config.cache_dir.empty()) {
        backend = std::make_shared<CachedBackend>(std::move(backend), std::filesystem::path(config.cache_dir));
    }
    return backend;
}

} // namespace

BackendSet make_backends(const BackendConfig& config)
{
    auto clock = std::make_shared<SteadyClock>();
    if (config.kind == "mock") {
        MockOptions options;
        options.seed = config.seed;
        auto shared = wrap(std::make_shared<MockBackend>(options), config, clock);
        return {shared, shared, shared, shared};
    }
    if (config.kind == "http" || config.kind == "live") {
        const auto make = [&](const std::string& model) {
            HttpOptions options;
            options.base_url = config.base_url;
            options.api_key_env = config.api_key_env;
            options.chat_model = model;
            options.embedding_model = config.embedding_model;
            options.timeout_seconds = config.timeout_seconds;
            return std::make_shared<HttpBackend>(options);
        };
        // One limiter for every slot: the provider quota is shared.
        BackendPtr user = make(config.user_model);
        BackendPtr assistant = make(config.assistant_model);
        BackendPtr judge = make(config.judge_model);
        BackendPtr embedding = make(config.embedding_model);
        if (config.requests_per_minute > 0) {
            auto limiter = std::make_shared<RateLimiter>(config.requests_per_minute, clock);
            user = std::make_shared<RateLimitedBackend>(user, limiter);
            assistant = std::make_shared<RateLimitedBackend>(assistant, limiter);
            judge = std::make_shared<RateLimitedBackend>(judge, limiter);
            embedding = std::make_shared<RateLimitedBackend>(embedding, limiter);
        }
        BackendConfig uncached = config;
        uncached.requests_per_minute = 0;
        return {wrap(user, uncached, clock), wrap(assistant, uncached, clock), wrap(judge, uncached, clock),
                wrap(embedding, uncached, clock)};
    }
    throw ConfigError(fmt::format("unknown backend.kind '{}' (expected mock or http)", config.kind));
}

} // namespace ultrachat
