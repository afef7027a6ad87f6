// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"
#include "ultrachat/eval/judge.hpp"
#include "ultrachat/gateway/chat_backend.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ultrachat {

/// "User: ..." / "Assistant: ..." lines.
std::string transcript(const Dialogue& dialogue);

std::string render_coherence(const Dialogue& dialogue);

/// Judge score 1..10, or nullopt once the retries are spent.
std::optional<int> coherence_score(const Dialogue& dialogue, ChatBackend& judge, const eval::JudgeOptions& options = {});

struct CoherenceSummary {
    double mean = 0.0;
    std::size_t sample_size = 0;
    std::size_t scored = 0;
    std::size_t skipped = 0;
};

/// Mean over a seeded sample of records sorted by id.
CoherenceSummary coherence(const std::vector<Dialogue>& dataset, std::size_t sample_n, std::uint64_t seed,
                           ChatBackend& judge, const eval::JudgeOptions& options = {}, std::size_t concurrency = 1);

} // namespace ultrachat
