// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/stats/report.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/record_io.hpp"
#include "ultrachat/core/text.hpp"
#include "ultrachat/core/tokenizer.hpp"

#include <fmt/format.h>

namespace ultrachat {

DatasetReport dataset_report(const std::vector<Dialogue>& dataset, const ReportOptions& options, std::string name)
{
    if (dataset.empty()) {
        throw PreconditionError("dataset report needs at least one dialogue");
    }
    const Tokenizer& tokenizer = options.tokenizer != nullptr ? *options.tokenizer : default_tokenizer();
    DatasetReport report;
    report.name = std::move(name);
    report.tokenizer = std::string(tokenizer.name());
    report.dialogue_count = dataset.size();
    report.mtld_threshold = options.mtld_threshold;

    double rounds = 0.0;
    double dialogue_tokens = 0.0;
    double utterance_tokens = 0.0;
    std::size_t utterances = 0;
    for (const auto& dialogue : dataset) {
        rounds += static_cast<double>(dialogue.rounds());
        std::size_t total = 0;
        for (const auto& turn : dialogue.turns) {
            const auto count = tokenizer.count(turn.content);
            total += count;
            utterance_tokens += static_cast<double>(count);
            ++utterances;
        }
        dialogue_tokens += static_cast<double>(total);
    }
    const auto n = static_cast<double>(dataset.size());
    report.avg_rounds = rounds / n;
    report.avg_dialogue_tokens = dialogue_tokens / n;
    report.avg_utterance_tokens = utterances == 0 ? 0.0 : utterance_tokens / static_cast<double>(utterances);
    report.lexical = lexical_diversity(dataset, tokenizer, options.min_mtld_tokens, options.mtld_threshold);
    if (options.embedder != nullptr && dataset.size() >= 2) {
        report.topic = topic_diversity(dataset, options.topic_sample, options.seed, *options.embedder, options.topic_text);
    }
    if (options.judge != nullptr) {
        report.coherence = coherence(dataset, options.coherence_sample, options.seed, *options.judge,
                                     options.judge_options, options.concurrency);
    }
    return report;
}

nlohmann::json to_json(const DatasetReport& report)
{
    nlohmann::json json = {
        {"name", report.name},
        {"tokenizer", report.tokenizer},
        {"dialogue_count", report.dialogue_count},
        {"avg_rounds", report.avg_rounds},
        {"avg_dialogue_tokens", report.avg_dialogue_tokens},
        {"avg_utterance_tokens", report.avg_utterance_tokens},
        {"lexical_diversity",
         {{"mtld", report.lexical.value},
          {"threshold", report.mtld_threshold},
          {"utterances", report.lexical.utterances},
          {"skipped", report.lexical.skipped}}},
        {"topic_diversity", nullptr},
        {"coherence", nullptr},
    };
    if (report.topic) {
        json["topic_diversity"] = {{"value", report.topic->value}, {"sample_size", report.topic->sample_size}};
    }
    if (report.coherence) {
        json["coherence"] = {{"mean", report.coherence->mean},
                             {"sample_size", report.coherence->sample_size},
                             {"scored", report.coherence->scored},
                             {"skipped", report.coherence->skipped}};
    }
    return json;
}

std::string format_report(const std::vector<DatasetReport>& reports)
{
    std::string out = fmt::format("{:<24} {:>10} {:>12} {:>19} {:>17} {:>18} {:>16} {:>10}\n", "Dataset", "#Dialogue",
                                  "Avg. #Turns", "Avg. Dialog Length", "Avg. Utt. Length", "Lexical Diversity",
                                  "Topic Diversity", "Coherence");
    for (const auto& r : reports) {
        out += fmt::format("{:<24} {:>10} {:>12.2f} {:>19.1f} {:>17.1f} {:>18.2f} {:>16} {:>10}\n", r.name,
                           r.dialogue_count, r.avg_rounds, r.avg_dialogue_tokens, r.avg_utterance_tokens,
                           r.lexical.value, r.topic ? fmt::format("{:.4f}", r.topic->value) : "-",
                           r.coherence && r.coherence->scored > 0 ? fmt::format("{:.2f}", r.coherence->mean) : "-");
    }
    if (!reports.empty()) {
        out += fmt::format("tokenizer: {}; turns are counted as user+assistant rounds\n", reports.front().tokenizer);
    }
    return out;
}

std::vector<Dialogue> parse_shard(std::string_view text, const Tokenizer& tokenizer)
{
    std::vector<Dialogue> out;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty()) {
            continue;
        }
        try {
            const auto json = nlohmann::json::parse(line);
            Dialogue dialogue;
            if (json.contains("messages")) {
                for (const auto& message : json.at("messages")) {
                    const auto role = message.at("role").get<std::string>();
                    if (role == "system") {
                        continue;
                    }
                    dialogue.turns.push_back(make_turn(role == "user" ? Role::user : Role::assistant,
                                                       message.at("content").get<std::string>(), tokenizer));
                }
            } else {
                const auto& data = json.at("data");
                for (std::size_t i = 0; i < data.size(); ++i) {
                    dialogue.turns.push_back(
                        make_turn(i % 2 == 0 ? Role::user : Role::assistant, data[i].get<std::string>(), tokenizer));
                }
            }
            if (dialogue.turns.empty()) {
                continue;
            }
            dialogue.sector = Sector::world_questions;
            dialogue.opening_id = opening_id(dialogue.sector, dialogue.turns.front().content);
            dialogue.id = json.contains("id") ? (json["id"].is_string() ? json["id"].get<std::string>() : json["id"].dump())
                                              : dialogue_id(dialogue.sector, dialogue.turns);
            dialogue.backend_fingerprint = "external";
            out.push_back(std::move(dialogue));
        } catch (const nlohmann::json::exception& error) {
            throw ParseError(line_no, fmt::format("shard line needs 'data' strings or 'messages' objects: {}", error.what()));
        }
    }
    return out;
}

std::vector<Dialogue> load_dataset(const std::filesystem::path& path)
{
    const auto text = read_file(path);
    const auto first = trim(std::string_view(text).substr(0, text.find('\n')));
    if (first.empty()) {
        return {};
    }
    nlohmann::json probe;
    try {
        probe = nlohmann::json::parse(first);
    } catch (const nlohmann::json::exception& error) {
        throw ParseError(1, error.what());
    }
    if ((probe.contains("data") || probe.contains("messages")) && !probe.contains("kind")) {
        return parse_shard(text, default_tokenizer());
    }
    return read_dialogues(path);
}

} // namespace ultrachat
