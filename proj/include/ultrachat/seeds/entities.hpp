// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"
#include "ultrachat/gateway/chat_backend.hpp"
#include "ultrachat/seeds/generation.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat::seeds {

inline constexpr std::size_t kMaxEntityRank = 10000;

struct EntitySeed {
    std::string name;
    std::size_t rank = 0;

    bool operator==(const EntitySeed&) const = default;
};

/// Parses "rank<TAB>name" lines; '#' lines and blanks are skipped. Entities
/// ranked past `max_rank` are left out. Throws ParseError on malformed lines.
std::vector<EntitySeed> parse_entities(std::string_view text, std::size_t max_rank = kMaxEntityRank);
std::vector<EntitySeed> load_entities(const std::filesystem::path& path, std::size_t max_rank = kMaxEntityRank);
/// The shipped 100-entity sample.
std::vector<EntitySeed> sample_entities();

enum class EntityCountMode {
    per_meta,   ///< specific and extended counts apply to each meta-question
    per_entity, ///< counts are totals for the entity, spread round-robin over metas
};

struct EntityCounts {
    std::size_t meta = 5;
    std::size_t specific = 10;
    std::size_t extended = 20;
    EntityCountMode mode = EntityCountMode::per_meta;
};

struct EntityQuestions {
    std::vector<std::string> meta;
    std::vector<std::vector<std::string>> specific; ///< indexed like meta
    std::vector<std::vector<std::string>> extended; ///< indexed like meta

    std::size_t total() const;
};

/// Share of `total` assigned to meta-question `index` of `metas`.
std::size_t round_robin_share(std::size_t total, std::size_t metas, std::size_t index);

/// Extended questions must share a content word with their meta-question and differ from it.
bool is_valid_extension(std::string_view meta, std::string_view extended);

EntityQuestions entity_questions(const EntitySeed& entity, const EntityCounts& counts, ChatBackend& backend,
                                 const GenerationOptions& options = {});

/// Sector-1 openings for every question, meta-questions first.
std::vector<OpeningLine> entity_openings(const EntitySeed& entity, const EntityQuestions& questions);

} // namespace ultrachat::seeds
