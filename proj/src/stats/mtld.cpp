// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/stats/mtld.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/text.hpp"
#include "ultrachat/core/tokenizer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace ultrachat {

double mtld_pass(const std::vector<std::string>& tokens, double threshold)
{
    double factors = 0.0;
    std::unordered_set<std::string_view> types;
    std::size_t count = 0;
    for (const auto& token : tokens) {
        types.insert(token);
        ++count;
        const double ttr = static_cast<double>(types.size()) / static_cast<double>(count);
        if (ttr <= threshold) {
            factors += 1.0;
            types.clear();
            count = 0;
        }
    }
    if (count > 0) {
        const double ttr = static_cast<double>(types.size()) / static_cast<double>(count);
        factors += (1.0 - ttr) / (1.0 - threshold);
    }
    const auto n = static_cast<double>(tokens.size());
    return factors == 0.0 ? n : n / factors;
}

double mtld(const std::vector<std::string>& tokens, double threshold)
{
    if (tokens.empty()) {
        throw PreconditionError("mtld needs at least one token");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw PreconditionError(fmt::format("mtld threshold {} is outside (0, 1)", threshold));
    }
    std::vector<std::string> folded;
    folded.reserve(tokens.size());
    for (const auto& token : tokens) {
        folded.push_back(casefold(token));
    }
    const double forward = mtld_pass(folded, threshold);
    std::vector<std::string> reversed(folded.rbegin(), folded.rend());
    const double backward = mtld_pass(reversed, threshold);
    return (forward + backward) / 2.0;
}

LexicalDiversity lexical_diversity(const std::vector<Dialogue>& dataset, const Tokenizer& tokenizer,
                                   std::size_t min_tokens, double threshold)
{
    if (dataset.empty()) {
        throw PreconditionError("lexical diversity needs a non-empty dataset");
    }
    LexicalDiversity out;
    std::vector<double> scores;
    for (const auto& dialogue : dataset) {
        for (const auto& turn : dialogue.turns) {
            const auto tokens = tokenizer.tokenize(turn.content);
            if (tokens.size() < min_tokens || tokens.empty()) {
                ++out.skipped;
                continue;
            }
            scores.push_back(mtld(tokens, threshold));
        }
    }
    out.utterances = scores.size();
    if (out.utterances == 0) {
        throw PreconditionError(fmt::format("every utterance has fewer than {} tokens", min_tokens));
    }
    // Summed in sorted order so the mean does not depend on record order.
    std::sort(scores.begin(), scores.end());
    const double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
    out.value = sum / static_cast<double>(out.utterances);
    return out;
}

} // namespace ultrachat
