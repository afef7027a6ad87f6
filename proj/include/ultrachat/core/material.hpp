// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat {

/// The twenty writing categories, in their fixed order. The order breaks ties
/// when classifying corpus pieces.
enum class MaterialType {
    articles_blog_posts,
    job_application_material,
    stories,
    legal_documents,
    poems,
    educational_content,
    screenplays,
    language_learning_scripts,
    technical_reports,
    marketing_materials,
    social_media_posts,
    personal_essays,
    emails,
    scientific_papers,
    speeches,
    recipes,
    news_articles,
    song_lyrics,
    product_descriptions,
    programs_code,
};

inline constexpr std::size_t kMaterialTypeCount = 20;

const std::array<MaterialType, kMaterialTypeCount>& all_material_types();
std::string_view slug(MaterialType type);
std::string_view display_name(MaterialType type);
std::optional<MaterialType> material_from_slug(std::string_view slug);

/// Curated URL keywords per material type, loaded from material_keywords.json.
class MaterialKeywordTable {
public:
    /// Throws ConfigError unless the document lists each of the 20 types
    /// exactly once with a non-empty, lowercase keyword list.
    static MaterialKeywordTable from_json(std::string_view text);
    static const MaterialKeywordTable& standard();

    const std::vector<std::string>& keywords(MaterialType type) const
    {
        return keywords_[static_cast<std::size_t>(type)];
    }
    int version() const { return version_; }

private:
    std::array<std::vector<std::string>, kMaterialTypeCount> keywords_;
    int version_ = 0;
};

} // namespace ultrachat
