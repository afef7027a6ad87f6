// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/validation.hpp"

#include "ultrachat/core/text.hpp"
#include "ultrachat/core/tokenizer.hpp"

#include <algorithm>

namespace ultrachat {

namespace {

void add_once(std::vector<std::string>& out, const char* violation)
{
    if (std::find(out.begin(), out.end(), violation) == out.end()) {
        out.emplace_back(violation);
    }
}

} // namespace

ValidationResult validate_dialogue(const Dialogue& dialogue, const DialogueLimits& limits)
{
    return validate_dialogue(dialogue, limits, default_tokenizer());
}

ValidationResult validate_dialogue(const Dialogue& dialogue, const DialogueLimits& limits, const Tokenizer& tokenizer)
{
    ValidationResult result;
    auto& out = result.violations;
    const auto& turns = dialogue.turns;

    if (dialogue.id.empty()) {
        add_once(out, violation::kMissingId);
    }
    if (turns.size() < 2) {
        add_once(out, violation::kTooFewTurns);
    }
    if (turns.size() > limits.max_turns) {
        add_once(out, violation::kTooManyTurns);
    }
    if (!turns.empty()) {
        if (turns.front().role != Role::user) {
            add_once(out, violation::kFirstTurnNotUser);
        }
        if (opening_id(dialogue.sector, turns.front().content) != dialogue.opening_id) {
            add_once(out, violation::kOpeningMismatch);
        }
    }
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (i > 0 && turns[i].role == turns[i - 1].role) {
            add_once(out, violation::kRolesNotAlternating);
        }
        if (trim(turns[i].content).empty()) {
            add_once(out, violation::kEmptyTurn);
        }
        if (tokenizer.count(turns[i].content) != turns[i].token_count) {
            add_once(out, violation::kTokenCountMismatch);
        }
    }
    return result;
}

ValidationResult validate_opening(const OpeningLine& opening)
{
    ValidationResult result;
    if (trim(opening.text).empty()) {
        result.violations.emplace_back("opening text must be non-empty");
    }
    if (opening.lineage.empty()) {
        result.violations.emplace_back("opening lineage must be non-empty");
    }
    const auto& vocabulary = lineage_vocabulary(opening.sector);
    for (const auto& step : opening.lineage) {
        if (std::find(vocabulary.begin(), vocabulary.end(), step.stage) == vocabulary.end()) {
            result.violations.push_back("lineage stage '" + step.stage + "' not allowed for sector " +
                                        std::string(to_string(opening.sector)));
        }
    }
    if (opening.id != opening_id(opening.sector, opening.text)) {
        result.violations.emplace_back("opening id does not match content");
    }
    return result;
}

} // namespace ultrachat
