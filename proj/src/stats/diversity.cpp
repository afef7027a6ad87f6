// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/stats/diversity.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ultrachat {

double cosine_distance(const Embedding& a, const Embedding& b)
{
    if (a.size() != b.size() || a.empty()) {
        throw PreconditionError(fmt::format("cannot compare embeddings of dimension {} and {}", a.size(), b.size()));
    }
    double dot = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) {
        throw PreconditionError("cosine distance is undefined for a zero vector");
    }
    return 1.0 - dot / std::sqrt(aa * bb);
}

double mean_pairwise_distance(const std::vector<Embedding>& vectors)
{
    if (vectors.size() < 2) {
        throw PreconditionError("pairwise distance needs at least two vectors");
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            sum += cosine_distance(vectors[i], vectors[j]);
            ++pairs;
        }
    }
    return std::clamp(sum / static_cast<double>(pairs), 0.0, 2.0);
}

std::string topic_text(const Dialogue& dialogue, TopicText mode)
{
    if (mode == TopicText::opening || dialogue.turns.size() <= 1) {
        return dialogue.turns.empty() ? std::string{} : dialogue.turns.front().content;
    }
    std::string out;
    for (const auto& turn : dialogue.turns) {
        if (!out.empty()) {
            out.push_back('\n');
        }
        out.append(turn.content);
    }
    return out;
}

std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n, std::uint64_t seed)
{
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (n >= size) {
        return order;
    }
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        std::swap(order[i], order[i + rng.below(size - i)]);
    }
    order.resize(n);
    std::sort(order.begin(), order.end());
    return order;
}

TopicDiversity topic_diversity(const std::vector<Dialogue>& dataset, std::size_t sample_n, std::uint64_t seed,
                               ChatBackend& embedder, TopicText mode, std::size_t batch_size)
{
    if (dataset.size() < 2) {
        throw PreconditionError("topic diversity needs at least two records");
    }
    std::vector<const Dialogue*> sorted;
    for (const auto& dialogue : dataset) {
        sorted.push_back(&dialogue);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const Dialogue* a, const Dialogue* b) { return a->id < b->id; });
    const auto picks = sample_indices(sorted.size(), std::max<std::size_t>(sample_n, 2), seed);

    std::vector<std::string> texts;
    for (auto i : picks) {
        texts.push_back(topic_text(*sorted[i], mode));
    }
    std::vector<Embedding> vectors;
    batch_size = std::max<std::size_t>(batch_size, 1);
    for (std::size_t start = 0; start < texts.size(); start += batch_size) {
        const std::vector<std::string> batch(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                             texts.begin() + static_cast<std::ptrdiff_t>(std::min(texts.size(), start + batch_size)));
        auto part = embedder.embed(batch);
        for (auto& v : part) {
            vectors.push_back(std::move(v));
        }
    }
    return {mean_pairwise_distance(vectors), vectors.size()};
}

} // namespace ultrachat
