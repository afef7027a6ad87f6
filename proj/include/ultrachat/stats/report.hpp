// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"
#include "ultrachat/eval/judge.hpp"
#include "ultrachat/gateway/chat_backend.hpp"
#include "ultrachat/stats/coherence.hpp"
#include "ultrachat/stats/diversity.hpp"
#include "ultrachat/stats/mtld.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ultrachat {

class Tokenizer;

struct ReportOptions {
    const Tokenizer* tokenizer = nullptr; ///< null uses the default tokenizer
    double mtld_threshold = kDefaultMtldThreshold;
    std::size_t min_mtld_tokens = 3;
    std::size_t topic_sample = 10000;
    std::size_t coherence_sample = 200;
    std::uint64_t seed = 42;
    TopicText topic_text = TopicText::full_dialogue;
    ChatBackend* embedder = nullptr; ///< topic diversity is skipped without one
    ChatBackend* judge = nullptr;    ///< coherence is skipped without one
    eval::JudgeOptions judge_options;
    std::size_t concurrency = 1;
};

struct DatasetReport {
    std::string name;
    std::string tokenizer;
    std::size_t dialogue_count = 0;
    double avg_rounds = 0.0;
    double avg_dialogue_tokens = 0.0;
    double avg_utterance_tokens = 0.0;
    double mtld_threshold = kDefaultMtldThreshold;
    LexicalDiversity lexical;
    std::optional<TopicDiversity> topic;
    std::optional<CoherenceSummary> coherence;
};

/// Token counts are taken from the report tokenizer, not the stored counts.
/// Throws PreconditionError on an empty dataset.
DatasetReport dataset_report(const std::vector<Dialogue>& dataset, const ReportOptions& options,
                             std::string name = "dataset");

nlohmann::json to_json(const DatasetReport& report);
/// Aligned table with the columns #Dialogue, Avg. #Turns, Avg. Dialog Length,
/// Avg. Utt. Length, Lexical Diversity, Topic Diversity, Coherence.
std::string format_report(const std::vector<DatasetReport>& reports);

/// Reads dialogues from our JSONL format or from a public shard whose lines
/// look like {"id": ..., "data": [user, assistant, ...]} or carry a
/// "messages" list of {"role", "content"} objects.
std::vector<Dialogue> load_dataset(const std::filesystem::path& path);
std::vector<Dialogue> parse_shard(std::string_view text, const Tokenizer& tokenizer);

} // namespace ultrachat
