// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat {

class Tokenizer;

/// Sentence-head phrases: `user` ones are stripped from simulated user turns,
/// `reply` ones from the head of the assistant answer that follows.
struct PolitenessList {
    std::vector<std::string> user;
    std::vector<std::string> reply;

    /// Lines "user: <phrase>" or "reply: <phrase>"; '#' lines and blanks are
    /// skipped. Phrases are stored normalized. Throws ConfigError otherwise.
    static PolitenessList from_text(std::string_view text);
    static const PolitenessList& standard();
};

/// Splits after terminal punctuation that is followed by whitespace. Each
/// segment keeps its trailing whitespace, so the segments concatenate back to the input.
std::vector<std::string_view> split_sentences(std::string_view text);

/// The normalized sentence begins with the phrase and the phrase ends at a
/// non-alphanumeric character (or the end).
bool starts_with_phrase(std::string_view sentence, const std::vector<std::string>& phrases);

struct PolitenessResult {
    Dialogue dialogue;
    std::size_t sentences_removed = 0;
    std::size_t rounds_removed = 0;

    bool changed() const { return sentences_removed > 0; }
};

/// Removes politeness sentences from user turns after the opening, and
/// leading reply phrases from the assistant turn answering an edited user
/// turn. Rounds left with an empty turn are deleted whole; token counts are
/// recomputed and the id is kept. Idempotent.
PolitenessResult strip_politeness(const Dialogue& dialogue, const PolitenessList& list, const Tokenizer& tokenizer);
PolitenessResult strip_politeness(const Dialogue& dialogue);

} // namespace ultrachat
