// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/eval/eval_io.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/record_io.hpp"

#include <fmt/format.h>

#include <unordered_map>
#include <unordered_set>

namespace ultrachat::eval {

std::vector<EvalItem> load_eval_set(const std::filesystem::path& path)
{
    std::vector<EvalItem> items;
    std::unordered_set<std::string> ids;
    for_each_line(path, [&](std::string_view line, std::size_t line_no) {
        try {
            const auto json = nlohmann::json::parse(line);
            EvalItem item;
            item.id = json.at("id").is_string() ? json.at("id").get<std::string>() : json.at("id").dump();
            item.question = json.at("question").get<std::string>();
            item.category = json.value("category", std::string("uncategorized"));
            if (!ids.insert(item.id).second) {
                throw InputError(fmt::format("{}: duplicate item id '{}'", path.string(), item.id));
            }
            items.push_back(std::move(item));
        } catch (const nlohmann::json::exception& error) {
            throw ParseError(line_no, fmt::format("eval item needs id and question: {}", error.what()));
        }
    });
    return items;
}

std::size_t attach_answers(std::vector<EvalItem>& items, const std::string& model, const std::filesystem::path& path)
{
    std::unordered_map<std::string, EvalItem*> by_id;
    for (auto& item : items) {
        by_id.emplace(item.id, &item);
    }
    std::size_t attached = 0;
    for_each_line(path, [&](std::string_view line, std::size_t line_no) {
        try {
            const auto json = nlohmann::json::parse(line);
            const auto id = json.at("id").is_string() ? json.at("id").get<std::string>() : json.at("id").dump();
            if (auto it = by_id.find(id); it != by_id.end()) {
                it->second->answers[model] = json.at("answer").get<std::string>();
                ++attached;
            }
        } catch (const nlohmann::json::exception& error) {
            throw ParseError(line_no, fmt::format("answer line needs id and answer: {}", error.what()));
        }
    });
    return attached;
}

nlohmann::json to_json(const JudgeVerdict& verdict)
{
    return {
        {"item_id", verdict.item_id},
        {"category", verdict.category},
        {"mode", to_string(verdict.mode)},
        {"models", verdict.models},
        {"scores", verdict.scores},
        {"presented_first", verdict.presented_first},
        {"judged", verdict.judged},
        {"attempts", verdict.attempts},
        {"rationale", verdict.rationale},
    };
}

JudgeVerdict verdict_from_json(const nlohmann::json& json)
{
    JudgeVerdict verdict;
    verdict.item_id = json.at("item_id").get<std::string>();
    verdict.category = json.at("category").get<std::string>();
    verdict.mode = json.at("mode").get<std::string>() == "pairwise" ? JudgeMode::pairwise : JudgeMode::independent;
    verdict.models = json.at("models").get<std::vector<std::string>>();
    verdict.scores = json.at("scores").get<std::vector<int>>();
    verdict.presented_first = json.at("presented_first").get<std::string>();
    verdict.judged = json.at("judged").get<bool>();
    verdict.attempts = json.at("attempts").get<std::size_t>();
    verdict.rationale = json.at("rationale").get<std::string>();
    return verdict;
}

void write_verdicts(const std::filesystem::path& path, const std::vector<JudgeVerdict>& verdicts)
{
    std::string content;
    for (const auto& verdict : verdicts) {
        content += to_json(verdict).dump();
        content.push_back('\n');
    }
    write_file_atomic(path, content);
}

std::vector<JudgeVerdict> read_verdicts(const std::filesystem::path& path)
{
    std::vector<JudgeVerdict> out;
    for_each_line(path, [&](std::string_view line, std::size_t line_no) {
        try {
            out.push_back(verdict_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& error) {
            throw ParseError(line_no, error.what());
        }
    });
    return out;
}

} // namespace ultrachat::eval
