// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/gateway/http_backend.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/hash.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <regex>

namespace ultrachat {

HttpBackend::HttpBackend(HttpOptions options) : options_(std::move(options))
{
    static const std::regex url_re(R"(^(https?)://([^/]+)(/.*)?$)");
    std::smatch match;
    if (!std::regex_match(options_.base_url, match, url_re)) {
        throw ConfigError(fmt::format("backend.base_url '{}' is not an http(s) URL", options_.base_url));
    }
    origin_ = match[1].str() + "://" + match[2].str();
    prefix_ = match[3].str();
    while (!prefix_.empty() && prefix_.back() == '/') {
        prefix_.pop_back();
    }
    if (!options_.api_key_env.empty()) {
        const char* key = std::getenv(options_.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            throw ConfigError(fmt::format("live backend needs an API key in ${}", options_.api_key_env));
        }
        api_key_ = key;
    }
    if (!options_.sleeper) {
        options_.sleeper = real_sleeper();
    }
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::fingerprint() const
{
    return fmt::format("http {} model={}", options_.base_url, options_.chat_model);
}

std::string HttpBackend::post(const std::string& path, const std::string& body)
{
    const auto attempt = [&]() -> std::string {
        httplib::Client client(origin_);
        client.set_connection_timeout(options_.timeout_seconds, 0);
        client.set_read_timeout(options_.timeout_seconds, 0);
        client.set_write_timeout(options_.timeout_seconds, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) {
            headers.emplace("Authorization", "Bearer " + api_key_);
        }
        auto result = client.Post(prefix_ + path, headers, body, "application/json");
        if (!result) {
            throw BackendError(fmt::format("transport error: {}", httplib::to_string(result.error())), 1, true);
        }
        if (result->status < 200 || result->status >= 300) {
            const bool retryable = is_retryable_status(result->status);
            spdlog::warn("POST {} returned HTTP {}{}", path, result->status, retryable ? ", retrying" : "");
            throw BackendError(fmt::format("HTTP {}: {}", result->status, result->body.substr(0, 200)), 1, retryable);
        }
        return result->body;
    };
    return call_with_retry(options_.retry, attempt, options_.sleeper, hash64(fmt::format("{}\x1f{}", path, sequence_.fetch_add(1))));
}

std::string HttpBackend::do_complete(const ChatRequest& request)
{
    auto messages = nlohmann::json::array();
    for (const auto& message : request.messages) {
        messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
    }
    const nlohmann::json body = {
        {"model", request.model_name.empty() ? options_.chat_model : request.model_name},
        {"messages", std::move(messages)},
        {"temperature", request.temperature},
        {"max_tokens", request.max_output_tokens},
    };
    const auto reply = post("/chat/completions", body.dump());
    try {
        const auto json = nlohmann::json::parse(reply);
        return json.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& error) {
        throw BackendError(fmt::format("malformed chat completion response: {}", error.what()), 1);
    }
}

std::vector<Embedding> HttpBackend::do_embed(const std::vector<std::string>& texts)
{
    const nlohmann::json body = {{"model", options_.embedding_model}, {"input", texts}};
    const auto reply = post("/embeddings", body.dump());
    try {
        const auto json = nlohmann::json::parse(reply);
        std::vector<Embedding> out(texts.size());
        for (const auto& item : json.at("data")) {
            const auto index = item.at("index").get<std::size_t>();
            if (index >= out.size()) {
                throw BackendError("embedding response index out of range", 1);
            }
            out[index] = item.at("embedding").get<Embedding>();
        }
        return out;
    } catch (const nlohmann::json::exception& error) {
        throw BackendError(fmt::format("malformed embedding response: {}", error.what()), 1);
    }
}

} // namespace ultrachat
