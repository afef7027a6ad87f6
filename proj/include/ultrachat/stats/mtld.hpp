// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ultrachat {

class Tokenizer;

inline constexpr double kDefaultMtldThreshold = 0.72;

/// One directional pass over already-casefolded tokens. A pass that never
/// completes a factor and ends on an all-distinct remainder scores the token count.
double mtld_pass(const std::vector<std::string>& tokens, double threshold);

/// Mean of the forward and backward passes over casefolded tokens.
/// Throws PreconditionError on empty input or a threshold outside (0, 1).
double mtld(const std::vector<std::string>& tokens, double threshold = kDefaultMtldThreshold);

struct LexicalDiversity {
    double value = 0.0;
    std::size_t utterances = 0; ///< utterances scored
    std::size_t skipped = 0;    ///< utterances below the token minimum
};

/// Mean MTLD over every turn of every dialogue; turns shorter than
/// `min_tokens` are skipped. Throws PreconditionError if nothing is scored.
LexicalDiversity lexical_diversity(const std::vector<Dialogue>& dataset, const Tokenizer& tokenizer,
                                   std::size_t min_tokens = 3, double threshold = kDefaultMtldThreshold);

} // namespace ultrachat
