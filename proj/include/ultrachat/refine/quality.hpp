// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/record_io.hpp"
#include "ultrachat/core/types.hpp"
#include "ultrachat/refine/dedup.hpp"
#include "ultrachat/refine/politeness.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ultrachat {

class Tokenizer;

namespace reject_reason {
inline constexpr const char* kEmptyTurn = "empty turn";
inline constexpr const char* kNotAlternating = "non-alternating roles";
inline constexpr const char* kOpeningMismatch = "opening mismatch";
inline constexpr const char* kTooFewRounds = "too few rounds";
inline constexpr const char* kTooManyTurns = "too many turns";
inline constexpr const char* kTokenMismatch = "token count mismatch";
inline constexpr const char* kRoleExchange = "role exchange";
inline constexpr const char* kPoliteOpening = "politeness in opening";
inline constexpr const char* kTooShort = "utterance too short";
inline constexpr const char* kTooLong = "utterance too long";
inline constexpr const char* kMissingId = "missing id";
inline constexpr const char* kDuplicate = "duplicate";
} // namespace reject_reason

struct QualityBounds {
    std::size_t min_utterance_tokens = 1;
    std::size_t max_utterance_tokens = 2048;
    std::size_t min_rounds = 2;
    std::size_t max_turns = 16;
};

struct QualityVerdict {
    bool keep = true;
    std::string reason;
};

/// First failing rule decides the reason; structural rules come before length bounds.
QualityVerdict quality_gate(const Dialogue& dialogue, const QualityBounds& bounds, const Tokenizer& tokenizer);
QualityVerdict quality_gate(const Dialogue& dialogue, const QualityBounds& bounds = {});

struct RefineResult {
    std::vector<Dialogue> kept;
    std::vector<RejectRecord> rejects;
    FilterReport report;
};

/// Politeness stripping, then the quality gate, then dedup. Every input ends
/// up in exactly one of kept or rejects.
RefineResult refine_dialogues(const std::vector<Dialogue>& dialogues, const QualityBounds& bounds,
                              const PolitenessList& politeness, const Tokenizer& tokenizer);

} // namespace ultrachat
