// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/material.hpp"

#include "ultrachat/core/embedded_data.hpp"
#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ultrachat {

namespace {

struct MaterialInfo {
    std::string_view slug;
    std::string_view display;
};

constexpr std::array<MaterialInfo, kMaterialTypeCount> kInfo = {{
    {"articles_blog_posts", "Articles and Blog Posts"},
    {"job_application_material", "Job Application Material"},
    {"stories", "Stories"},
    {"legal_documents", "Legal Documents and Contracts"},
    {"poems", "Poems"},
    {"educational_content", "Educational Content"},
    {"screenplays", "Screenplays"},
    {"language_learning_scripts", "Scripts for Language Learning"},
    {"technical_reports", "Technical Documents and Reports"},
    {"marketing_materials", "Marketing Materials"},
    {"social_media_posts", "Social Media Posts"},
    {"personal_essays", "Personal Essays"},
    {"emails", "Emails"},
    {"scientific_papers", "Scientific Papers and Summaries"},
    {"speeches", "Speeches and Presentations"},
    {"recipes", "Recipes and Cooking Instructions"},
    {"news_articles", "News Articles"},
    {"song_lyrics", "Song Lyrics"},
    {"product_descriptions", "Product Descriptions and Reviews"},
    {"programs_code", "Programs and Code"},
}};

} // namespace

const std::array<MaterialType, kMaterialTypeCount>& all_material_types()
{
    static const auto types = [] {
        std::array<MaterialType, kMaterialTypeCount> out{};
        for (std::size_t i = 0; i < kMaterialTypeCount; ++i) {
            out[i] = static_cast<MaterialType>(i);
        }
        return out;
    }();
    return types;
}

std::string_view slug(MaterialType type)
{
    return kInfo[static_cast<std::size_t>(type)].slug;
}

std::string_view display_name(MaterialType type)
{
    return kInfo[static_cast<std::size_t>(type)].display;
}

std::optional<MaterialType> material_from_slug(std::string_view name)
{
    for (std::size_t i = 0; i < kMaterialTypeCount; ++i) {
        if (kInfo[i].slug == name) {
            return static_cast<MaterialType>(i);
        }
    }
    return std::nullopt;
}

MaterialKeywordTable MaterialKeywordTable::from_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("material keyword table: {}", e.what()));
    }
    MaterialKeywordTable table;
    table.version_ = doc.value("version", 0);
    std::array<bool, kMaterialTypeCount> seen{};
    const auto categories = doc.value("categories", nlohmann::json::array());
    for (const auto& category : categories) {
        const auto name = category.value("slug", std::string{});
        const auto type = material_from_slug(name);
        if (!type) {
            throw ConfigError(fmt::format("material keyword table: unknown category '{}'", name));
        }
        const auto index = static_cast<std::size_t>(*type);
        if (seen[index]) {
            throw ConfigError(fmt::format("material keyword table: duplicate category '{}'", name));
        }
        seen[index] = true;
        for (const auto& keyword : category.value("keywords", nlohmann::json::array())) {
            auto value = keyword.get<std::string>();
            if (value.empty() || ascii_lower(value) != value) {
                throw ConfigError(fmt::format("material keyword table: keyword '{}' must be non-empty lowercase", value));
            }
            table.keywords_[index].push_back(std::move(value));
        }
        if (table.keywords_[index].empty()) {
            throw ConfigError(fmt::format("material keyword table: '{}' has no keywords", name));
        }
    }
    for (std::size_t i = 0; i < kMaterialTypeCount; ++i) {
        if (!seen[i]) {
            throw ConfigError(fmt::format("material keyword table: missing category '{}'", kInfo[i].slug));
        }
    }
    return table;
}

const MaterialKeywordTable& MaterialKeywordTable::standard()
{
    static const MaterialKeywordTable table = from_json(*embedded_file("material_keywords.json"));
    return table;
}

} // namespace ultrachat
