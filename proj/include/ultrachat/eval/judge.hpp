// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/gateway/chat_backend.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ultrachat::eval {

struct EvalItem {
    std::string id;
    std::string question;
    std::string category;
    std::map<std::string, std::string> answers; ///< model name -> answer

    bool operator==(const EvalItem&) const = default;
};

enum class JudgeMode { pairwise, independent };

std::string_view to_string(JudgeMode mode);

struct JudgeVerdict {
    std::string item_id;
    std::string category;
    JudgeMode mode = JudgeMode::independent;
    /// Judged models; pairwise verdicts list (model_a, model_b).
    std::vector<std::string> models;
    /// Aligned with `models`; empty when unjudged.
    std::vector<int> scores;
    /// Model shown as "Assistant 1" (pairwise only).
    std::string presented_first;
    bool judged = false;
    std::size_t attempts = 0;
    /// Raw text of the last judge reply.
    std::string rationale;

    bool operator==(const JudgeVerdict&) const = default;
};

struct JudgeOptions {
    /// Re-asks with a format reminder after an unparseable reply.
    std::size_t max_retries = 2;
    double temperature = 0.0;
    int max_output_tokens = 512;
    std::string model;
};

std::string render_pairwise(std::string_view question, std::string_view answer_1, std::string_view answer_2);
std::string render_independent(std::string_view question, std::string_view answer);

/// System message is the rendered text up to the first blank line; the rest is the user message.
ChatRequest judge_request(const std::string& rendered, const JudgeOptions& options);

/// First reply line must be two integers in 1..10 separated by whitespace.
std::optional<std::pair<int, int>> parse_pairwise(std::string_view reply);

/// First "Score: n" occurrence; decimals and values outside 1..10 are rejected.
std::optional<int> parse_score(std::string_view reply);

/// Seeded coin: true when model_a is presented as Assistant 1.
bool model_a_first(std::uint64_t seed, std::string_view item_id, std::string_view model_a, std::string_view model_b);

/// Maps slot scores (Assistant 1, Assistant 2) back to (model_a, model_b).
std::pair<int, int> unmap_scores(bool a_first, std::pair<int, int> slot_scores);

template <typename T>
struct Asked {
    std::optional<T> value;
    std::size_t attempts = 0;
    std::string reply;
};

/// Asks until the reply parses or retries run out; each retry appends the
/// format reminder to the user message.
Asked<int> ask_score(ChatBackend& judge, const ChatRequest& request, std::size_t max_retries);
Asked<std::pair<int, int>> ask_pairwise(ChatBackend& judge, const ChatRequest& request, std::size_t max_retries);

/// Throws PreconditionError if either answer is missing.
JudgeVerdict pairwise_compare(const EvalItem& item, const std::string& model_a, const std::string& model_b,
                              ChatBackend& judge, std::uint64_t seed, const JudgeOptions& options = {});

/// Throws PreconditionError if the answer is missing.
JudgeVerdict independent_score(const EvalItem& item, const std::string& model, ChatBackend& judge,
                               const JudgeOptions& options = {});

/// Judges every item holding both answers, in parallel; output follows input order.
std::vector<JudgeVerdict> compare_all(const std::vector<EvalItem>& items, const std::string& model_a,
                                      const std::string& model_b, ChatBackend& judge, std::uint64_t seed,
                                      const JudgeOptions& options, std::size_t concurrency);
std::vector<JudgeVerdict> score_all(const std::vector<EvalItem>& items, const std::vector<std::string>& models,
                                    ChatBackend& judge, const JudgeOptions& options, std::size_t concurrency);

} // namespace ultrachat::eval
