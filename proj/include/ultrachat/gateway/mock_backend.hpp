// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/gateway/chat_backend.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ultrachat {

struct MockOptions {
    std::uint64_t seed = 0;
    /// Chance the simulated user ends the dialogue once at least two rounds exist.
    double stop_rate = 0.33;
    /// Chance a simulated user message opens with a thank-you.
    double politeness_rate = 0.15;
    /// Chance a simulated user message is nothing but a thank-you.
    double closing_thanks_rate = 0.05;
    /// Chance the simulated user slips into the assistant role.
    double role_exchange_rate = 0.02;
    std::size_t embedding_dimension = 64;
};

/// Offline backend. Every reply is a pure function of (seed, request): the
/// request is hashed, the hash seeds a generator, and the generator fills
/// templated sentences. Prompts from the catalog are recognized so that seed
/// lists, simulated users, and judges get replies of the right shape.
/// Scripted rules, checked first, pin exact strings for tests.
class MockBackend final : public ChatBackend {
public:
    using Rule = std::function<std::optional<std::string>(const ChatRequest&)>;

    explicit MockBackend(MockOptions options = {});

    /// Replies in turn with `replies` whenever the last message contains
    /// `needle`; the final reply repeats once the queue drains.
    void script(std::string needle, std::vector<std::string> replies);
    void add_rule(Rule rule);

    std::string fingerprint() const override;
    const MockOptions& options() const { return options_; }

protected:
    std::string do_complete(const ChatRequest& request) override;
    std::vector<Embedding> do_embed(const std::vector<std::string>& texts) override;

private:
    struct Script {
        std::string needle;
        std::deque<std::string> replies;
    };

    std::optional<std::string> scripted(const ChatRequest& request);

    MockOptions options_;
    std::mutex mutex_;
    std::vector<Script> scripts_;
    std::vector<Rule> rules_;
};

} // namespace ultrachat
