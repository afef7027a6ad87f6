// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat {

enum class MessageRole { system, user, assistant };

std::string_view to_string(MessageRole role);

struct ChatMessage {
    MessageRole role = MessageRole::user;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    double temperature = 0.7;
    int max_output_tokens = 1024;
    std::string model_name;

    bool operator==(const ChatRequest&) const = default;
};

/// Throws PreconditionError unless messages are non-empty, the last message is
/// not from the assistant, temperature >= 0 and max_output_tokens > 0.
void validate_request(const ChatRequest& request);

/// Key-sorted JSON form; equal requests serialize to equal bytes.
nlohmann::json canonical_json(const ChatRequest& request);

/// SHA-256 of the canonical serialization.
std::string request_key(const ChatRequest& request);

using Embedding = std::vector<double>;

/// Chat-completion and embedding provider. Implementations must be safe for
/// concurrent use. The public entry points validate input and output and count
/// calls; subclasses implement do_complete and do_embed.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;

    /// Returns non-empty completion text. Throws BackendError on failure.
    std::string complete(const ChatRequest& request);

    /// One vector per text, uniform dimension, finite values.
    std::vector<Embedding> embed(const std::vector<std::string>& texts);

    /// Stable description of what produces the outputs (kind, seed, model).
    virtual std::string fingerprint() const = 0;

    std::uint64_t complete_calls() const { return complete_calls_.load(); }
    std::uint64_t embed_calls() const { return embed_calls_.load(); }

protected:
    virtual std::string do_complete(const ChatRequest& request) = 0;
    virtual std::vector<Embedding> do_embed(const std::vector<std::string>& texts) = 0;

private:
    std::atomic<std::uint64_t> complete_calls_{0};
    std::atomic<std::uint64_t> embed_calls_{0};
};

using BackendPtr = std::shared_ptr<ChatBackend>;

/// Backend driven by caller-supplied functions; used for fixtures and fault injection.
class LambdaBackend final : public ChatBackend {
public:
    using CompleteFn = std::function<std::string(const ChatRequest&)>;
    using EmbedFn = std::function<std::vector<Embedding>(const std::vector<std::string>&)>;

    explicit LambdaBackend(CompleteFn complete, EmbedFn embed = {}, std::string fingerprint = "lambda");

    std::string fingerprint() const override { return fingerprint_; }

protected:
    std::string do_complete(const ChatRequest& request) override;
    std::vector<Embedding> do_embed(const std::vector<std::string>& texts) override;

private:
    CompleteFn complete_;
    EmbedFn embed_;
    std::string fingerprint_;
};

} // namespace ultrachat
