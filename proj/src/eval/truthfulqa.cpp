// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/eval/truthfulqa.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/parallel.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/core/record_io.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <regex>

namespace ultrachat::eval {

std::optional<bool> parse_true_false(std::string_view reply)
{
    static const std::regex word_re(R"(\b(true|false)\b)", std::regex::icase);
    const std::string text(reply);
    std::smatch match;
    if (!std::regex_search(text, match, word_re)) {
        return std::nullopt;
    }
    return ascii_lower(match[1].str()) == "true";
}

TruthfulResult truthfulqa_mc(const std::vector<TruthfulItem>& items, ChatBackend& model, const TruthfulOptions& options)
{
    if (items.empty()) {
        throw PreconditionError("truthfulqa needs at least one item");
    }
    TruthfulResult result;
    result.total = items.size();
    result.predictions = parallel_map<std::optional<bool>>(items.size(), options.concurrency, [&](std::size_t i) {
        ChatRequest request;
        request.messages.push_back({MessageRole::user, prompts::truthfulqa(items[i].question, items[i].answer)});
        request.temperature = options.temperature;
        request.max_output_tokens = options.max_output_tokens;
        request.model_name = options.model;
        return parse_true_false(model.complete(request));
    });
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& prediction = result.predictions[i];
        if (!prediction) {
            ++result.unparseable;
        } else if (*prediction == items[i].label) {
            ++result.correct;
        }
    }
    result.accuracy = static_cast<double>(result.correct) / static_cast<double>(result.total);
    return result;
}

std::vector<TruthfulItem> parse_truthful_jsonl(std::string_view text)
{
    std::vector<TruthfulItem> out;
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
            const auto& label = json.at("label");
            bool value = false;
            if (label.is_boolean()) {
                value = label.get<bool>();
            } else {
                const auto word = ascii_lower(label.get<std::string>());
                if (word != "true" && word != "false") {
                    throw ParseError(line_no, fmt::format("label '{}' is not true or false", word));
                }
                value = word == "true";
            }
            out.push_back({json.at("question").get<std::string>(), json.at("answer").get<std::string>(), value});
        } catch (const nlohmann::json::exception& error) {
            throw ParseError(line_no, error.what());
        }
    }
    return out;
}

std::vector<TruthfulItem> parse_truthful_mc_task(std::string_view text)
{
    std::vector<TruthfulItem> out;
    try {
        // Ordered, so candidates keep file order.
        const auto json = nlohmann::ordered_json::parse(text);
        for (const auto& entry : json) {
            const auto question = entry.at("question").get<std::string>();
            for (const auto& [answer, label] : entry.at("mc1_targets").items()) {
                out.push_back({question, answer, label.get<int>() == 1});
            }
        }
    } catch (const nlohmann::json::exception& error) {
        throw ParseError(1, fmt::format("not a TruthfulQA mc_task file: {}", error.what()));
    }
    return out;
}

std::vector<TruthfulItem> load_truthful(const std::filesystem::path& path)
{
    const auto text = read_file(path);
    const auto body = trim(text);
    if (!body.empty() && body.front() == '[') {
        return parse_truthful_mc_task(text);
    }
    return parse_truthful_jsonl(text);
}

} // namespace ultrachat::eval
