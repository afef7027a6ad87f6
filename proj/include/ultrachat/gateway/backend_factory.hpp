// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/gateway/chat_backend.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace ultrachat {

struct BackendConfig {
    std::string kind = "mock"; ///< "mock" or "http"
    std::uint64_t seed = 42;
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string user_model = "gpt-3.5-turbo";
    std::string assistant_model = "gpt-3.5-turbo";
    std::string judge_model = "gpt-4";
    std::string embedding_model = "text-embedding-ada-002";
    std::size_t requests_per_minute = 0; ///< 0 disables throttling
    std::string cache_dir;               ///< empty disables the disk cache
    int timeout_seconds = 120;
};

/// The logical backend slots. Slots may share one instance.
struct BackendSet {
    BackendPtr user;
    BackendPtr assistant;
    BackendPtr judge;
    BackendPtr embedding;
};

/// Builds cache(rate-limit(live)) stacks, or a single shared mock.
/// Throws ConfigError on an unknown kind or missing credentials.
BackendSet make_backends(const BackendConfig& config);

} // namespace ultrachat
