// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/seeds/sampling.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/rng.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>

#include <numeric>
#include <unordered_set>

namespace ultrachat::seeds {

std::vector<OpeningLine> unique_openings(const std::vector<OpeningLine>& pool)
{
    std::unordered_set<std::string> seen;
    std::vector<OpeningLine> out;
    for (const auto& opening : pool) {
        if (seen.insert(normalize_for_dedup(opening.text)).second) {
            out.push_back(opening);
        }
    }
    return out;
}

std::vector<OpeningLine> within_length(const std::vector<OpeningLine>& pool, std::size_t min_chars,
                                       std::size_t max_chars)
{
    std::vector<OpeningLine> out;
    for (const auto& opening : pool) {
        if (opening.text.size() >= min_chars && opening.text.size() <= max_chars) {
            out.push_back(opening);
        }
    }
    return out;
}

std::vector<OpeningLine> sample_openings(const std::vector<OpeningLine>& pool, std::size_t n, std::uint64_t seed)
{
    auto unique = unique_openings(pool);
    if (n > unique.size()) {
        throw PreconditionError(fmt::format("cannot sample {} openings from a pool of {} distinct lines ({} before dedup)",
                                            n, unique.size(), pool.size()));
    }
    std::vector<std::size_t> order(unique.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    // Partial Fisher-Yates: position i receives a uniform pick from the remainder.
    for (std::size_t i = 0; i < n; ++i) {
        std::swap(order[i], order[i + rng.below(order.size() - i)]);
    }
    std::vector<OpeningLine> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::move(unique[order[i]]));
    }
    return out;
}

} // namespace ultrachat::seeds
