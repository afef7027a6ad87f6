// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace ultrachat {

/// Accounting for one filtering pass. Drops are per rule; edits count
/// records that were changed but kept flowing.
struct FilterReport {
    std::size_t input = 0;
    std::size_t kept = 0;
    std::map<std::string, std::size_t> dropped;
    std::map<std::string, std::size_t> edited;

    std::size_t total_dropped() const;
    /// kept + drops == input.
    bool conserved() const { return kept + total_dropped() == input; }
    nlohmann::json to_json() const;
};

template <typename T>
struct DedupResult {
    std::vector<T> kept;
    FilterReport report;
};

/// Normalized text of every turn; equal keys mean duplicate dialogues.
std::string dialogue_dedup_key(const Dialogue& dialogue);

/// Exact duplicates under normalize_for_dedup; first occurrence wins.
DedupResult<std::string> dedup_pool(const std::vector<std::string>& texts);
DedupResult<OpeningLine> dedup_pool(const std::vector<OpeningLine>& openings);
/// Dialogues compare by the normalized text of every turn.
DedupResult<Dialogue> dedup_pool(const std::vector<Dialogue>& dialogues);

} // namespace ultrachat
