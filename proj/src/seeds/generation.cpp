// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/seeds/generation.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <regex>
#include <unordered_set>

namespace ultrachat::seeds {

namespace {

constexpr std::array<std::string_view, 28> kImperatives = {
    "analyze", "compare", "create",   "define", "describe",  "discuss", "evaluate", "explain", "explore", "give",
    "help",    "identify", "imagine", "list",   "name",      "outline", "please",   "provide", "recommend", "share",
    "show",    "suggest", "summarize", "teach", "tell",      "walk",    "write",    "illustrate",
};

} // namespace

std::vector<std::string> parse_list(std::string_view reply)
{
    static const std::regex numbering(R"(^(\d+[.)]|[-*]|•)\s*)");
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= reply.size()) {
        auto end = reply.find('\n', start);
        if (end == std::string_view::npos) {
            end = reply.size();
        }
        std::string line(trim(reply.substr(start, end - start)));
        line = std::regex_replace(line, numbering, "", std::regex_constants::format_first_only);
        line = std::string(trim(line));
        if (!line.empty()) {
            items.push_back(std::move(line));
        }
        start = end + 1;
    }
    return items;
}

bool is_question_like(std::string_view text)
{
    text = trim(text);
    if (text.empty()) {
        return false;
    }
    if (text.back() == '?' || (text.size() >= 3 && text.substr(text.size() - 3) == "\xEF\xBC\x9F")) {
        return true;
    }
    const auto space = text.find_first_of(" \t,:");
    const auto first = ascii_lower(text.substr(0, space));
    return std::find(kImperatives.begin(), kImperatives.end(), first) != kImperatives.end();
}

ChatRequest seed_request(std::string prompt, const GenerationOptions& options)
{
    ChatRequest request;
    request.messages.push_back({MessageRole::user, std::move(prompt)});
    request.temperature = options.temperature;
    request.max_output_tokens = options.max_output_tokens;
    request.model_name = options.model;
    return request;
}

std::vector<std::string> collect_distinct(ChatBackend& backend, std::size_t n, const PromptFn& prompt,
                                          const AcceptFn& accept, const GenerationOptions& options,
                                          std::string_view what, const std::vector<std::string>& exclude)
{
    std::unordered_set<std::string> seen;
    for (const auto& item : exclude) {
        seen.insert(normalize_for_dedup(item));
    }
    std::vector<std::string> items;
    for (std::size_t attempt = 0; attempt <= options.retry_cap && items.size() < n; ++attempt) {
        if (attempt > 0) {
            spdlog::debug("{}: {} of {} distinct items, retry {}", what, items.size(), n, attempt);
        }
        const auto reply = backend.complete(seed_request(prompt(n - items.size(), attempt), options));
        for (auto& item : parse_list(reply)) {
            if (items.size() == n) {
                break;
            }
            auto key = normalize_for_dedup(item);
            if (key.empty() || (accept && !accept(item)) || !seen.insert(std::move(key)).second) {
                continue;
            }
            items.push_back(std::move(item));
        }
    }
    if (items.size() < n) {
        throw PartialResultError(fmt::format("{}: only {} of {} distinct items after {} retries", what, items.size(), n,
                                             options.retry_cap),
                                 n, std::move(items));
    }
    return items;
}

} // namespace ultrachat::seeds
