// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/stats/coherence.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/parallel.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/stats/diversity.hpp"

#include <algorithm>

namespace ultrachat {

std::string transcript(const Dialogue& dialogue)
{
    std::string out;
    for (const auto& turn : dialogue.turns) {
        if (!out.empty()) {
            out.push_back('\n');
        }
        out.append(turn.role == Role::user ? "User: " : "Assistant: ").append(turn.content);
    }
    return out;
}

std::string render_coherence(const Dialogue& dialogue)
{
    return prompts::render(prompts::kCoherenceTemplate, {{"conversation", transcript(dialogue)}});
}

std::optional<int> coherence_score(const Dialogue& dialogue, ChatBackend& judge, const eval::JudgeOptions& options)
{
    return eval::ask_score(judge, eval::judge_request(render_coherence(dialogue), options), options.max_retries).value;
}

CoherenceSummary coherence(const std::vector<Dialogue>& dataset, std::size_t sample_n, std::uint64_t seed,
                           ChatBackend& judge, const eval::JudgeOptions& options, std::size_t concurrency)
{
    std::vector<const Dialogue*> sorted;
    for (const auto& dialogue : dataset) {
        sorted.push_back(&dialogue);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const Dialogue* a, const Dialogue* b) { return a->id < b->id; });
    const auto picks = sample_indices(sorted.size(), sample_n, seed);
    const auto scores = parallel_map<std::optional<int>>(picks.size(), concurrency, [&](std::size_t i) {
        return coherence_score(*sorted[picks[i]], judge, options);
    });
    CoherenceSummary summary;
    summary.sample_size = picks.size();
    double sum = 0.0;
    for (const auto& score : scores) {
        if (score) {
            sum += *score;
            ++summary.scored;
        } else {
            ++summary.skipped;
        }
    }
    summary.mean = summary.scored == 0 ? 0.0 : sum / static_cast<double>(summary.scored);
    return summary;
}

} // namespace ultrachat
