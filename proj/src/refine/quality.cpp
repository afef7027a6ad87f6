// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/refine/quality.hpp"

#include "ultrachat/core/text.hpp"
#include "ultrachat/core/tokenizer.hpp"
#include "ultrachat/simulate/role_exchange.hpp"

#include <fmt/format.h>

#include <unordered_set>

namespace ultrachat {

QualityVerdict quality_gate(const Dialogue& dialogue, const QualityBounds& bounds, const Tokenizer& tokenizer)
{
    const auto reject = [](const char* reason) { return QualityVerdict{false, reason}; };
    const auto& turns = dialogue.turns;
    if (dialogue.id.empty()) {
        return reject(reject_reason::kMissingId);
    }
    for (const auto& turn : turns) {
        if (turn.token_count == 0 || trim(turn.content).empty()) {
            return reject(reject_reason::kEmptyTurn);
        }
    }
    if (turns.empty() || turns.size() % 2 != 0) {
        return reject(reject_reason::kNotAlternating);
    }
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (turns[i].role != (i % 2 == 0 ? Role::user : Role::assistant)) {
            return reject(reject_reason::kNotAlternating);
        }
    }
    if (opening_id(dialogue.sector, turns.front().content) != dialogue.opening_id) {
        return reject(reject_reason::kOpeningMismatch);
    }
    if (dialogue.rounds() < bounds.min_rounds) {
        return reject(reject_reason::kTooFewRounds);
    }
    if (turns.size() > bounds.max_turns) {
        return reject(reject_reason::kTooManyTurns);
    }
    for (const auto& turn : turns) {
        if (tokenizer.count(turn.content) != turn.token_count) {
            return reject(reject_reason::kTokenMismatch);
        }
    }
    for (std::size_t i = 0; i < turns.size(); i += 2) {
        if (detect_role_exchange(turns[i].content)) {
            return reject(reject_reason::kRoleExchange);
        }
    }
    if (starts_with_phrase(turns.front().content, PolitenessList::standard().user)) {
        return reject(reject_reason::kPoliteOpening);
    }
    for (const auto& turn : turns) {
        if (turn.token_count < bounds.min_utterance_tokens) {
            return reject(reject_reason::kTooShort);
        }
        if (turn.token_count > bounds.max_utterance_tokens) {
            return reject(reject_reason::kTooLong);
        }
    }
    return {};
}

QualityVerdict quality_gate(const Dialogue& dialogue, const QualityBounds& bounds)
{
    return quality_gate(dialogue, bounds, default_tokenizer());
}

RefineResult refine_dialogues(const std::vector<Dialogue>& dialogues, const QualityBounds& bounds,
                              const PolitenessList& politeness, const Tokenizer& tokenizer)
{
    RefineResult result;
    result.report.input = dialogues.size();
    std::unordered_set<std::string> seen;
    for (const auto& dialogue : dialogues) {
        auto stripped = strip_politeness(dialogue, politeness, tokenizer);
        if (stripped.changed()) {
            ++result.report.edited["politeness"];
        }
        auto verdict = quality_gate(stripped.dialogue, bounds, tokenizer);
        if (verdict.keep && !seen.insert(dialogue_dedup_key(stripped.dialogue)).second) {
            verdict = {false, reject_reason::kDuplicate};
        }
        if (!verdict.keep) {
            ++result.report.dropped[verdict.reason];
            result.rejects.push_back({"filter", verdict.reason, "", std::move(stripped.dialogue)});
            continue;
        }
        result.kept.push_back(std::move(stripped.dialogue));
    }
    result.report.kept = result.kept.size();
    return result;
}

} // namespace ultrachat
