// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ultrachat::seeds {

/// Drops openings whose normalized text was already seen; first occurrence wins.
std::vector<OpeningLine> unique_openings(const std::vector<OpeningLine>& pool);

/// Keeps openings whose text length in bytes lies in [min_chars, max_chars].
std::vector<OpeningLine> within_length(const std::vector<OpeningLine>& pool, std::size_t min_chars,
                                       std::size_t max_chars);

/// Seeded uniform sample without replacement from the deduplicated pool.
/// Throws PreconditionError naming the pool size when n exceeds it.
std::vector<OpeningLine> sample_openings(const std::vector<OpeningLine>& pool, std::size_t n, std::uint64_t seed);

} // namespace ultrachat::seeds
