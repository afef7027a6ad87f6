// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/gateway/chat_backend.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat::seeds {

struct GenerationOptions {
    /// Extra backend calls allowed when a batch comes back short after dedup.
    std::size_t retry_cap = 3;
    double temperature = 1.0;
    int max_output_tokens = 1024;
    std::string model;
    /// Bound on in-flight generation tasks.
    std::size_t concurrency = 1;
};

/// Splits a list reply into items, dropping blank lines, bullets and "1." / "1)" numbering.
std::vector<std::string> parse_list(std::string_view reply);

/// Ends with question punctuation, or opens with an imperative verb.
bool is_question_like(std::string_view text);

/// Renders the prompt for a call that still needs `missing` items on retry number `attempt`.
using PromptFn = std::function<std::string(std::size_t missing, std::size_t attempt)>;
using AcceptFn = std::function<bool(const std::string&)>;

/// Calls the backend until `n` items distinct under normalize_for_dedup and
/// accepted by `accept` are collected. Items whose key is in `exclude` are
/// dropped too. Throws PartialResultError after retry_cap extra calls.
std::vector<std::string> collect_distinct(ChatBackend& backend, std::size_t n, const PromptFn& prompt,
                                          const AcceptFn& accept, const GenerationOptions& options,
                                          std::string_view what, const std::vector<std::string>& exclude = {});

/// A single-user-message request with the generation options applied.
ChatRequest seed_request(std::string prompt, const GenerationOptions& options);

} // namespace ultrachat::seeds
