// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/gateway/chat_backend.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat::eval {

struct TruthfulItem {
    std::string question;
    std::string answer;
    bool label = false;

    bool operator==(const TruthfulItem&) const = default;
};

/// First standalone "true" or "false" word, case-insensitive.
std::optional<bool> parse_true_false(std::string_view reply);

struct TruthfulResult {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t unparseable = 0;
    double accuracy = 0.0;
    std::vector<std::optional<bool>> predictions;
};

struct TruthfulOptions {
    std::string model;
    double temperature = 0.0;
    int max_output_tokens = 16;
    std::size_t concurrency = 1;
};

/// Asks the model about every candidate; unparseable replies count as wrong.
/// Throws PreconditionError on an empty item list.
TruthfulResult truthfulqa_mc(const std::vector<TruthfulItem>& items, ChatBackend& model,
                             const TruthfulOptions& options = {});

/// JSONL with {"question", "answer", "label"}; label is a boolean or "true"/"false".
std::vector<TruthfulItem> parse_truthful_jsonl(std::string_view text);
/// The public benchmark's mc_task.json: every candidate of mc1_targets becomes an item.
std::vector<TruthfulItem> parse_truthful_mc_task(std::string_view text);
/// Picks the parser from the content: a top-level JSON array is mc_task.json.
std::vector<TruthfulItem> load_truthful(const std::filesystem::path& path);

} // namespace ultrachat::eval
