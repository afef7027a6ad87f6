// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/material.hpp"
#include "ultrachat/core/types.hpp"
#include "ultrachat/gateway/chat_backend.hpp"
#include "ultrachat/seeds/generation.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ultrachat::seeds {

/// floor(fraction * n) seeded-random indices in [0, n), ascending.
std::vector<std::size_t> refine_subset(std::size_t n, double fraction, std::uint64_t seed);

/// n sector-2 openings for a material type. A seeded floor(fraction * n)
/// subset goes through a second "more detailed" call; a failed refinement
/// keeps the first draft. Lineage records whether each item was refined.
std::vector<OpeningLine> writing_instructions(MaterialType type, std::size_t n, double refine_fraction,
                                              ChatBackend& backend, std::uint64_t seed,
                                              const GenerationOptions& options = {});

} // namespace ultrachat::seeds
