// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ultrachat {

class Tokenizer;

namespace violation {
inline constexpr const char* kFirstTurnNotUser = "first turn must be user";
inline constexpr const char* kRolesNotAlternating = "roles must alternate";
inline constexpr const char* kTooFewTurns = "dialogue needs at least 2 turns";
inline constexpr const char* kTooManyTurns = "dialogue exceeds maximum turns";
inline constexpr const char* kEmptyTurn = "turn content must be non-empty";
inline constexpr const char* kOpeningMismatch = "first turn must equal the opening line";
inline constexpr const char* kTokenCountMismatch = "token count does not match tokenizer";
inline constexpr const char* kMissingId = "dialogue id must be non-empty";
} // namespace violation

struct DialogueLimits {
    std::size_t max_turns = 16;
};

struct ValidationResult {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks every Dialogue invariant. The opening check recomputes the
/// content-addressed opening id from the first turn, so no opening pool is
/// needed. Each violated invariant is listed once.
ValidationResult validate_dialogue(const Dialogue& dialogue, const DialogueLimits& limits = {});
ValidationResult validate_dialogue(const Dialogue& dialogue, const DialogueLimits& limits, const Tokenizer& tokenizer);

/// Checks OpeningLine invariants: non-empty text and lineage, stage names
/// drawn from the sector vocabulary, id matching content.
ValidationResult validate_opening(const OpeningLine& opening);

} // namespace ultrachat
