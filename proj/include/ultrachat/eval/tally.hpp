// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/eval/judge.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ultrachat::eval {

/// Counts from model_a's side; a tie is exact score equality.
struct PairTally {
    std::size_t wins = 0;
    std::size_t ties = 0;
    std::size_t losses = 0;

    std::size_t compared() const { return wins + ties + losses; }
    bool operator==(const PairTally&) const = default;
};

/// Mean and population standard deviation.
struct ScoreStats {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

ScoreStats score_stats(const std::vector<int>& scores);

using ModelPair = std::pair<std::string, std::string>;

struct Tally {
    std::map<ModelPair, PairTally> pairs;
    std::map<std::string, std::map<ModelPair, PairTally>> pairs_by_category;
    /// Independent-mode scores.
    std::map<std::string, ScoreStats> scores;
    std::map<std::string, std::map<std::string, ScoreStats>> scores_by_category;
    /// Pairwise-mode scores per model.
    std::map<std::string, ScoreStats> pairwise_scores;
    std::size_t judged = 0;
    std::size_t unjudged = 0;
};

/// Deterministic fold over the verdicts sorted by item id.
Tally tally(std::vector<JudgeVerdict> verdicts);

nlohmann::json to_json(const Tally& tally);
/// Aligned text table: one row per model or pair, overall then per category.
std::string format_tally(const Tally& tally);

} // namespace ultrachat::eval
