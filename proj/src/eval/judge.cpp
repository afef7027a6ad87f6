// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/eval/judge.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/hash.hpp"
#include "ultrachat/core/parallel.hpp"
#include "ultrachat/core/prompts.hpp"

#include <fmt/format.h>

#include <regex>

namespace ultrachat::eval {

std::string_view to_string(JudgeMode mode)
{
    return mode == JudgeMode::pairwise ? "pairwise" : "independent";
}

std::string render_pairwise(std::string_view question, std::string_view answer_1, std::string_view answer_2)
{
    return prompts::render(prompts::kPairwiseTemplate,
                           {{"question", question}, {"answer_1", answer_1}, {"answer_2", answer_2}});
}

std::string render_independent(std::string_view question, std::string_view answer)
{
    return prompts::render(prompts::kIndependentTemplate, {{"question", question}, {"answer", answer}});
}

ChatRequest judge_request(const std::string& rendered, const JudgeOptions& options)
{
    ChatRequest request;
    const auto split = rendered.find("\n\n");
    if (split == std::string::npos) {
        request.messages.push_back({MessageRole::user, rendered});
    } else {
        request.messages.push_back({MessageRole::system, rendered.substr(0, split)});
        request.messages.push_back({MessageRole::user, rendered.substr(split + 2)});
    }
    request.temperature = options.temperature;
    request.max_output_tokens = options.max_output_tokens;
    request.model_name = options.model;
    return request;
}

std::optional<std::pair<int, int>> parse_pairwise(std::string_view reply)
{
    static const std::regex line_re(R"(^\s*(\d+)\s+(\d+)\s*$)");
    const std::string first(reply.substr(0, reply.find('\n')));
    std::smatch match;
    if (!std::regex_match(first, match, line_re) || match[1].length() > 2 || match[2].length() > 2) {
        return std::nullopt;
    }
    const int a = std::stoi(match[1].str());
    const int b = std::stoi(match[2].str());
    if (a < 1 || a > 10 || b < 1 || b > 10) {
        return std::nullopt;
    }
    return std::pair{a, b};
}

std::optional<int> parse_score(std::string_view reply)
{
    static const std::regex score_re(R"(score:\s*(\d+)(\.\d)?)", std::regex::icase);
    const std::string text(reply);
    std::smatch match;
    if (!std::regex_search(text, match, score_re) || match[2].matched || match[1].length() > 2) {
        return std::nullopt;
    }
    const int value = std::stoi(match[1].str());
    if (value < 1 || value > 10) {
        return std::nullopt;
    }
    return value;
}

bool model_a_first(std::uint64_t seed, std::string_view item_id, std::string_view model_a, std::string_view model_b)
{
    return (hash64(fmt::format("order\x1f{}\x1f{}\x1f{}\x1f{}", seed, item_id, model_a, model_b)) & 1U) == 0;
}

std::pair<int, int> unmap_scores(bool a_first, std::pair<int, int> slot_scores)
{
    return a_first ? slot_scores : std::pair{slot_scores.second, slot_scores.first};
}

namespace {

template <typename T, typename Parse>
Asked<T> ask(ChatBackend& judge, const ChatRequest& request, std::size_t max_retries, std::string_view reminder,
             Parse parse)
{
    Asked<T> asked;
    auto current = request;
    for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
        if (attempt > 0) {
            current.messages.back().content.append("\n\n").append(reminder);
        }
        ++asked.attempts;
        asked.reply = judge.complete(current);
        if (auto value = parse(asked.reply)) {
            asked.value = value;
            break;
        }
    }
    return asked;
}

const std::string& answer_of(const EvalItem& item, const std::string& model)
{
    const auto it = item.answers.find(model);
    if (it == item.answers.end()) {
        throw PreconditionError(fmt::format("item '{}' has no answer from '{}'", item.id, model));
    }
    return it->second;
}

} // namespace

Asked<int> ask_score(ChatBackend& judge, const ChatRequest& request, std::size_t max_retries)
{
    return ask<int>(judge, request, max_retries, prompts::kScoreFormatReminder, parse_score);
}

Asked<std::pair<int, int>> ask_pairwise(ChatBackend& judge, const ChatRequest& request, std::size_t max_retries)
{
    return ask<std::pair<int, int>>(judge, request, max_retries, prompts::kPairwiseFormatReminder, parse_pairwise);
}

JudgeVerdict pairwise_compare(const EvalItem& item, const std::string& model_a, const std::string& model_b,
                              ChatBackend& judge, std::uint64_t seed, const JudgeOptions& options)
{
    const auto& answer_a = answer_of(item, model_a);
    const auto& answer_b = answer_of(item, model_b);
    const bool a_first = model_a_first(seed, item.id, model_a, model_b);
    const auto rendered = a_first ? render_pairwise(item.question, answer_a, answer_b)
                                  : render_pairwise(item.question, answer_b, answer_a);
    const auto asked = ask_pairwise(judge, judge_request(rendered, options), options.max_retries);

    JudgeVerdict verdict;
    verdict.item_id = item.id;
    verdict.category = item.category;
    verdict.mode = JudgeMode::pairwise;
    verdict.models = {model_a, model_b};
    verdict.presented_first = a_first ? model_a : model_b;
    verdict.attempts = asked.attempts;
    verdict.rationale = asked.reply;
    if (asked.value) {
        const auto [a, b] = unmap_scores(a_first, *asked.value);
        verdict.scores = {a, b};
        verdict.judged = true;
    }
    return verdict;
}

JudgeVerdict independent_score(const EvalItem& item, const std::string& model, ChatBackend& judge,
                               const JudgeOptions& options)
{
    const auto& answer = answer_of(item, model);
    const auto asked = ask_score(judge, judge_request(render_independent(item.question, answer), options),
                                 options.max_retries);
    JudgeVerdict verdict;
    verdict.item_id = item.id;
    verdict.category = item.category;
    verdict.mode = JudgeMode::independent;
    verdict.models = {model};
    verdict.attempts = asked.attempts;
    verdict.rationale = asked.reply;
    if (asked.value) {
        verdict.scores = {*asked.value};
        verdict.judged = true;
    }
    return verdict;
}

std::vector<JudgeVerdict> compare_all(const std::vector<EvalItem>& items, const std::string& model_a,
                                      const std::string& model_b, ChatBackend& judge, std::uint64_t seed,
                                      const JudgeOptions& options, std::size_t concurrency)
{
    std::vector<const EvalItem*> eligible;
    for (const auto& item : items) {
        if (item.answers.count(model_a) != 0 && item.answers.count(model_b) != 0) {
            eligible.push_back(&item);
        }
    }
    return parallel_map<JudgeVerdict>(eligible.size(), concurrency, [&](std::size_t i) {
        return pairwise_compare(*eligible[i], model_a, model_b, judge, seed, options);
    });
}

std::vector<JudgeVerdict> score_all(const std::vector<EvalItem>& items, const std::vector<std::string>& models,
                                    ChatBackend& judge, const JudgeOptions& options, std::size_t concurrency)
{
    std::vector<std::pair<const EvalItem*, const std::string*>> jobs;
    for (const auto& item : items) {
        for (const auto& model : models) {
            if (item.answers.count(model) != 0) {
                jobs.emplace_back(&item, &model);
            }
        }
    }
    return parallel_map<JudgeVerdict>(jobs.size(), concurrency, [&](std::size_t i) {
        return independent_score(*jobs[i].first, *jobs[i].second, judge, options);
    });
}

} // namespace ultrachat::eval
