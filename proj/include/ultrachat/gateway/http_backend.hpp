// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/gateway/chat_backend.hpp"
#include "ultrachat/gateway/retry.hpp"

#include <atomic>
#include <memory>
#include <string>

namespace ultrachat {

struct HttpOptions {
    /// Scheme, host, optional port and path prefix, e.g. "https://api.openai.com/v1".
    std::string base_url = "https://api.openai.com/v1";
    /// Environment variable holding the bearer token; empty sends no Authorization header.
    std::string api_key_env = "OPENAI_API_KEY";
    std::string chat_model = "gpt-3.5-turbo";
    std::string embedding_model = "text-embedding-ada-002";
    int timeout_seconds = 120;
    RetryPolicy retry;
    Sleeper sleeper;
};

/// OpenAI-compatible /chat/completions and /embeddings client.
class HttpBackend final : public ChatBackend {
public:
    /// Throws ConfigError if the base URL is malformed or the key variable is unset.
    explicit HttpBackend(HttpOptions options);
    ~HttpBackend() override;

    std::string fingerprint() const override;

protected:
    std::string do_complete(const ChatRequest& request) override;
    std::vector<Embedding> do_embed(const std::vector<std::string>& texts) override;

private:
    std::string post(const std::string& path, const std::string& body);

    HttpOptions options_;
    std::string origin_;
    std::string prefix_;
    std::string api_key_;
    std::atomic<std::uint64_t> sequence_{0};
};

} // namespace ultrachat
