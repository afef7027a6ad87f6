// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/gateway/chat_backend.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/hash.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>

#include <cmath>

namespace ultrachat {

std::string_view to_string(MessageRole role)
{
    switch (role) {
    case MessageRole::system: return "system";
    case MessageRole::user: return "user";
    case MessageRole::assistant: return "assistant";
    }
    return "user";
}

void validate_request(const ChatRequest& request)
{
    if (request.messages.empty()) {
        throw PreconditionError("chat request has no messages");
    }
    if (request.messages.back().role == MessageRole::assistant) {
        throw PreconditionError("chat request must not end with an assistant message");
    }
    if (!(request.temperature >= 0.0) || !std::isfinite(request.temperature)) {
        throw PreconditionError("temperature must be a finite value >= 0");
    }
    if (request.max_output_tokens <= 0) {
        throw PreconditionError("max_output_tokens must be positive");
    }
}

nlohmann::json canonical_json(const ChatRequest& request)
{
    auto messages = nlohmann::json::array();
    for (const auto& message : request.messages) {
        messages.push_back(nlohmann::json::array({to_string(message.role), message.content}));
    }
    return nlohmann::json{
        {"max_output_tokens", request.max_output_tokens},
        {"messages", std::move(messages)},
        {"model", request.model_name},
        {"temperature", request.temperature},
    };
}

std::string request_key(const ChatRequest& request)
{
    return sha256_hex(canonical_json(request).dump());
}

std::string ChatBackend::complete(const ChatRequest& request)
{
    validate_request(request);
    complete_calls_.fetch_add(1);
    auto text = do_complete(request);
    if (trim(text).empty()) {
        throw BackendError("backend returned an empty completion", 1);
    }
    return text;
}

std::vector<Embedding> ChatBackend::embed(const std::vector<std::string>& texts)
{
    if (texts.empty()) {
        throw PreconditionError("embed needs at least one text");
    }
    embed_calls_.fetch_add(1);
    auto vectors = do_embed(texts);
    if (vectors.size() != texts.size()) {
        throw BackendError(fmt::format("backend returned {} embeddings for {} texts", vectors.size(), texts.size()), 1);
    }
    const auto dimension = vectors.front().size();
    for (const auto& vector : vectors) {
        if (vector.empty() || vector.size() != dimension) {
            throw BackendError("backend returned embeddings of non-uniform dimension", 1);
        }
        for (double value : vector) {
            if (!std::isfinite(value)) {
                throw BackendError("backend returned a non-finite embedding value", 1);
            }
        }
    }
    return vectors;
}

LambdaBackend::LambdaBackend(CompleteFn complete, EmbedFn embed, std::string fingerprint)
    : complete_(std::move(complete)), embed_(std::move(embed)), fingerprint_(std::move(fingerprint))
{
}

std::string LambdaBackend::do_complete(const ChatRequest& request)
{
    if (!complete_) {
        throw BackendError("lambda backend has no completion function", 1);
    }
    return complete_(request);
}

std::vector<Embedding> LambdaBackend::do_embed(const std::vector<std::string>& texts)
{
    if (!embed_) {
        throw BackendError("lambda backend has no embedding function", 1);
    }
    return embed_(texts);
}

} // namespace ultrachat
