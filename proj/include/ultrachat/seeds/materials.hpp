// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/material.hpp"
#include "ultrachat/core/types.hpp"
#include "ultrachat/gateway/chat_backend.hpp"
#include "ultrachat/seeds/generation.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat::seeds {

struct RawPiece {
    std::string url;
    std::string text;
};

struct TextPiece {
    std::string id;
    std::string source_url;
    std::string body;
    MaterialType material_type = MaterialType::articles_blog_posts;

    bool operator==(const TextPiece&) const = default;
};

/// Reads a JSONL corpus of {"url": ..., "text": ...} objects.
std::vector<RawPiece> load_corpus(const std::filesystem::path& path);
std::vector<RawPiece> parse_corpus(std::string_view text);
/// The shipped 30-piece sample corpus.
std::vector<RawPiece> sample_corpus();

/// Type whose keywords hit the lowercased URL most often (distinct keywords
/// counted once); ties go to the earlier type; no hits is unclassified.
std::optional<MaterialType> classify_piece(std::string_view url, std::string_view body,
                                           const MaterialKeywordTable& table = MaterialKeywordTable::standard());

/// Classifies each piece, dropping unclassified ones and empty bodies; keeps at most `limit` (0 keeps all).
std::vector<TextPiece> classify_corpus(const std::vector<RawPiece>& raw, const MaterialKeywordTable& table,
                                       std::size_t limit = 0);

struct ConcatTemplate {
    int id;
    std::string_view pattern;
};

inline constexpr std::size_t kConcatTemplateCount = 7;

const std::array<ConcatTemplate, kConcatTemplateCount>& concat_templates();

/// Single-pass instantiation; slot markers inside the values stay literal.
std::string render_concat(int template_id, std::string_view text, std::string_view instruction);

/// Seeded-uniform template for a (piece, instruction) pair.
int choose_template(std::uint64_t seed, std::string_view piece_id, std::string_view instruction);

/// Sector-3 opening; throws PreconditionError for template ids outside 1..7.
OpeningLine concat_material(const TextPiece& piece, std::string_view instruction, int template_id);

/// Rebuilds a sector-3 opening's text from its lineage and the source piece.
std::string replay_material_opening(const OpeningLine& opening, const TextPiece& piece);

/// n distinct instructions grounded in the piece body.
std::vector<std::string> material_instructions(const TextPiece& piece, std::size_t n, ChatBackend& backend,
                                               const GenerationOptions& options = {});

} // namespace ultrachat::seeds
