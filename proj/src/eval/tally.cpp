// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/eval/tally.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ultrachat::eval {

ScoreStats score_stats(const std::vector<int>& scores)
{
    ScoreStats stats;
    stats.count = scores.size();
    if (scores.empty()) {
        return stats;
    }
    double sum = 0.0;
    for (int s : scores) {
        sum += s;
    }
    stats.mean = sum / static_cast<double>(scores.size());
    double squares = 0.0;
    for (int s : scores) {
        const double d = s - stats.mean;
        squares += d * d;
    }
    stats.stddev = std::sqrt(squares / static_cast<double>(scores.size()));
    return stats;
}

namespace {

void count(PairTally& pair, int a, int b)
{
    if (a > b) {
        ++pair.wins;
    } else if (a == b) {
        ++pair.ties;
    } else {
        ++pair.losses;
    }
}

using ScoreLists = std::map<std::string, std::vector<int>>;

std::map<std::string, ScoreStats> summarize(const ScoreLists& lists)
{
    std::map<std::string, ScoreStats> out;
    for (const auto& [model, scores] : lists) {
        out[model] = score_stats(scores);
    }
    return out;
}

nlohmann::json stats_json(const std::map<std::string, ScoreStats>& stats)
{
    auto out = nlohmann::json::object();
    for (const auto& [model, s] : stats) {
        out[model] = {{"count", s.count}, {"mean", s.mean}, {"std", s.stddev}};
    }
    return out;
}

nlohmann::json pairs_json(const std::map<ModelPair, PairTally>& pairs)
{
    auto out = nlohmann::json::array();
    for (const auto& [key, p] : pairs) {
        out.push_back({{"model_a", key.first}, {"model_b", key.second}, {"wins", p.wins}, {"ties", p.ties},
                       {"losses", p.losses}});
    }
    return out;
}

} // namespace

Tally tally(std::vector<JudgeVerdict> verdicts)
{
    std::stable_sort(verdicts.begin(), verdicts.end(), [](const JudgeVerdict& x, const JudgeVerdict& y) {
        return std::tie(x.item_id, x.mode, x.models) < std::tie(y.item_id, y.mode, y.models);
    });
    Tally out;
    ScoreLists independent;
    std::map<std::string, ScoreLists> independent_by_category;
    ScoreLists pairwise;
    for (const auto& verdict : verdicts) {
        if (!verdict.judged || verdict.scores.size() != verdict.models.size()) {
            ++out.unjudged;
            continue;
        }
        ++out.judged;
        if (verdict.mode == JudgeMode::pairwise && verdict.models.size() == 2) {
            const ModelPair key{verdict.models[0], verdict.models[1]};
            count(out.pairs[key], verdict.scores[0], verdict.scores[1]);
            count(out.pairs_by_category[verdict.category][key], verdict.scores[0], verdict.scores[1]);
            pairwise[verdict.models[0]].push_back(verdict.scores[0]);
            pairwise[verdict.models[1]].push_back(verdict.scores[1]);
        } else if (verdict.mode == JudgeMode::independent && verdict.models.size() == 1) {
            independent[verdict.models[0]].push_back(verdict.scores[0]);
            independent_by_category[verdict.category][verdict.models[0]].push_back(verdict.scores[0]);
        }
    }
    out.scores = summarize(independent);
    for (const auto& [category, lists] : independent_by_category) {
        out.scores_by_category[category] = summarize(lists);
    }
    out.pairwise_scores = summarize(pairwise);
    return out;
}

nlohmann::json to_json(const Tally& t)
{
    auto by_category = nlohmann::json::object();
    for (const auto& [category, pairs] : t.pairs_by_category) {
        by_category[category] = pairs_json(pairs);
    }
    auto scores_by_category = nlohmann::json::object();
    for (const auto& [category, stats] : t.scores_by_category) {
        scores_by_category[category] = stats_json(stats);
    }
    return {
        {"judged", t.judged},
        {"unjudged", t.unjudged},
        {"pairs", pairs_json(t.pairs)},
        {"pairs_by_category", by_category},
        {"scores", stats_json(t.scores)},
        {"scores_by_category", scores_by_category},
        {"pairwise_scores", stats_json(t.pairwise_scores)},
    };
}

std::string format_tally(const Tally& t)
{
    std::string out;
    const auto pair_rows = [&](const std::string& scope, const std::map<ModelPair, PairTally>& pairs) {
        for (const auto& [key, p] : pairs) {
            out += fmt::format("{:<20} {:<16} {:<16} {:>5} {:>5} {:>5}\n", scope, key.first, key.second, p.wins, p.ties,
                               p.losses);
        }
    };
    const auto score_rows = [&](const std::string& scope, const std::map<std::string, ScoreStats>& stats) {
        for (const auto& [model, s] : stats) {
            out += fmt::format("{:<20} {:<16} {:>6} {:>6.2f} ± {:.2f}\n", scope, model, s.count, s.mean, s.stddev);
        }
    };
    if (!t.pairs.empty()) {
        out += fmt::format("{:<20} {:<16} {:<16} {:>5} {:>5} {:>5}\n", "scope", "model_a", "model_b", "win", "tie", "lose");
        pair_rows("overall", t.pairs);
        for (const auto& [category, pairs] : t.pairs_by_category) {
            pair_rows(category, pairs);
        }
    }
    if (!t.scores.empty()) {
        if (!out.empty()) {
            out += '\n';
        }
        out += fmt::format("{:<20} {:<16} {:>6} {}\n", "scope", "model", "n", "mean ± std");
        score_rows("overall", t.scores);
        for (const auto& [category, stats] : t.scores_by_category) {
            score_rows(category, stats);
        }
    }
    out += fmt::format("\njudged {}, unjudged {}\n", t.judged, t.unjudged);
    return out;
}

} // namespace ultrachat::eval
