// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"
#include "ultrachat/gateway/chat_backend.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ultrachat {

/// 1 - a.b / sqrt(|a|^2 |b|^2). Throws PreconditionError on zero or mismatched vectors.
double cosine_distance(const Embedding& a, const Embedding& b);

/// Mean cosine distance over all unordered pairs, accumulated in (i, j) order
/// with i < j, clamped to [0, 2]. Needs at least two vectors.
double mean_pairwise_distance(const std::vector<Embedding>& vectors);

enum class TopicText { full_dialogue, opening };

/// Text embedded for a record: every turn joined by newlines, or the opening only.
std::string topic_text(const Dialogue& dialogue, TopicText mode);

/// Seeded choice of min(n, size) indices, ascending.
std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n, std::uint64_t seed);

struct TopicDiversity {
    double value = 0.0;
    std::size_t sample_size = 0;
};

/// Records are sorted by id before sampling, so input order does not matter.
TopicDiversity topic_diversity(const std::vector<Dialogue>& dataset, std::size_t sample_n, std::uint64_t seed,
                               ChatBackend& embedder, TopicText mode = TopicText::full_dialogue,
                               std::size_t batch_size = 64);

} // namespace ultrachat
