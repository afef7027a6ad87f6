// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/refine/dedup.hpp"

#include "ultrachat/core/text.hpp"

#include <unordered_set>

namespace ultrachat {

std::size_t FilterReport::total_dropped() const
{
    std::size_t total = 0;
    for (const auto& [rule, count] : dropped) {
        total += count;
    }
    return total;
}

nlohmann::json FilterReport::to_json() const
{
    return {
        {"input", input},
        {"kept", kept},
        {"dropped", dropped},
        {"edited", edited},
        {"conserved", conserved()},
    };
}

namespace {

template <typename T, typename KeyFn>
DedupResult<T> dedup_by(const std::vector<T>& items, KeyFn key)
{
    DedupResult<T> result;
    result.report.input = items.size();
    std::unordered_set<std::string> seen;
    for (const auto& item : items) {
        if (seen.insert(key(item)).second) {
            result.kept.push_back(item);
        } else {
            ++result.report.dropped["duplicate"];
        }
    }
    result.report.kept = result.kept.size();
    return result;
}

} // namespace

DedupResult<std::string> dedup_pool(const std::vector<std::string>& texts)
{
    return dedup_by(texts, [](const std::string& text) { return normalize_for_dedup(text); });
}

DedupResult<OpeningLine> dedup_pool(const std::vector<OpeningLine>& openings)
{
    return dedup_by(openings, [](const OpeningLine& opening) { return normalize_for_dedup(opening.text); });
}

std::string dialogue_dedup_key(const Dialogue& dialogue)
{
    std::string key;
    for (const auto& turn : dialogue.turns) {
        key.append(normalize_for_dedup(turn.content));
        key.push_back('\x1e');
    }
    return key;
}

DedupResult<Dialogue> dedup_pool(const std::vector<Dialogue>& dialogues)
{
    return dedup_by(dialogues, dialogue_dedup_key);
}

} // namespace ultrachat
