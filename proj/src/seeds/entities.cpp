// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/seeds/entities.hpp"

#include "ultrachat/core/embedded_data.hpp"
#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/parallel.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/core/record_io.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>

namespace ultrachat::seeds {

std::vector<EntitySeed> parse_entities(std::string_view text, std::size_t max_rank)
{
    std::vector<EntitySeed> out;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        auto line = text.substr(start, end - start);
        start = end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (trim(line).empty() || trim(line).front() == '#') {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError(line_no, "expected 'rank<TAB>name'");
        }
        const auto rank_text = trim(line.substr(0, tab));
        std::size_t rank = 0;
        const auto [ptr, ec] = std::from_chars(rank_text.data(), rank_text.data() + rank_text.size(), rank);
        if (ec != std::errc{} || ptr != rank_text.data() + rank_text.size() || rank == 0) {
            throw ParseError(line_no, fmt::format("rank '{}' is not a positive integer", rank_text));
        }
        const auto name = trim(line.substr(tab + 1));
        if (name.empty()) {
            throw ParseError(line_no, "entity name is empty");
        }
        if (rank <= max_rank) {
            out.push_back({std::string(name), rank});
        }
    }
    return out;
}

std::vector<EntitySeed> load_entities(const std::filesystem::path& path, std::size_t max_rank)
{
    return parse_entities(read_file(path), max_rank);
}

std::vector<EntitySeed> sample_entities()
{
    return parse_entities(embedded_file("entities_sample.tsv").value());
}

std::size_t EntityQuestions::total() const
{
    std::size_t count = meta.size();
    for (const auto& batch : specific) {
        count += batch.size();
    }
    for (const auto& batch : extended) {
        count += batch.size();
    }
    return count;
}

std::size_t round_robin_share(std::size_t total, std::size_t metas, std::size_t index)
{
    if (metas == 0) {
        return 0;
    }
    return total / metas + (index < total % metas ? 1 : 0);
}

bool is_valid_extension(std::string_view meta, std::string_view extended)
{
    if (normalize_for_dedup(meta) == normalize_for_dedup(extended)) {
        return false;
    }
    const auto meta_words = content_words(meta);
    for (const auto& word : content_words(extended)) {
        if (std::find(meta_words.begin(), meta_words.end(), word) != meta_words.end()) {
            return true;
        }
    }
    return false;
}

EntityQuestions entity_questions(const EntitySeed& entity, const EntityCounts& counts, ChatBackend& backend,
                                 const GenerationOptions& options)
{
    if (trim(entity.name).empty()) {
        throw PreconditionError("entity name must be non-empty");
    }
    if (counts.meta == 0) {
        throw PreconditionError("entity questions need at least one meta-question");
    }
    EntityQuestions out;
    out.meta = collect_distinct(
        backend, counts.meta,
        [&](std::size_t missing, std::size_t attempt) {
            return prompts::entity_meta_questions(entity.name, missing, attempt);
        },
        [](const std::string& item) { return is_question_like(item); }, options,
        fmt::format("meta-questions on '{}'", entity.name));

    const auto share = [&](std::size_t per, std::size_t index) {
        return counts.mode == EntityCountMode::per_meta ? per : round_robin_share(per, out.meta.size(), index);
    };
    out.specific = parallel_map<std::vector<std::string>>(out.meta.size(), options.concurrency, [&](std::size_t i) {
        const auto n = share(counts.specific, i);
        if (n == 0) {
            return std::vector<std::string>{};
        }
        return collect_distinct(
            backend, n,
            [&](std::size_t missing, std::size_t attempt) {
                return prompts::entity_specific_questions(entity.name, out.meta[i], missing, attempt);
            },
            [](const std::string& item) { return is_question_like(item); }, options,
            fmt::format("specific questions for '{}'", out.meta[i]), {out.meta[i]});
    });
    out.extended = parallel_map<std::vector<std::string>>(out.meta.size(), options.concurrency, [&](std::size_t i) {
        const auto n = share(counts.extended, i);
        if (n == 0) {
            return std::vector<std::string>{};
        }
        const auto& meta = out.meta[i];
        return collect_distinct(
            backend, n,
            [&](std::size_t missing, std::size_t attempt) {
                return prompts::entity_extended_questions(entity.name, meta, missing, attempt);
            },
            [&](const std::string& item) { return is_valid_extension(meta, item); }, options,
            fmt::format("extended questions for '{}'", meta), {meta});
    });
    return out;
}

std::vector<OpeningLine> entity_openings(const EntitySeed& entity, const EntityQuestions& questions)
{
    const std::string version(prompts::kCatalogVersion);
    std::vector<OpeningLine> out;
    out.reserve(questions.total());
    for (const auto& meta : questions.meta) {
        out.push_back(make_opening(Sector::world_questions, meta, {{"entity", entity.name}, {"meta-question", version}}));
    }
    for (std::size_t i = 0; i < questions.meta.size(); ++i) {
        for (const auto& text : questions.specific[i]) {
            out.push_back(make_opening(Sector::world_questions, text,
                                       {{"entity", entity.name},
                                        {"meta-question", questions.meta[i]},
                                        {"specific-question", version}}));
        }
        for (const auto& text : questions.extended[i]) {
            out.push_back(make_opening(Sector::world_questions, text,
                                       {{"entity", entity.name},
                                        {"meta-question", questions.meta[i]},
                                        {"extended-question", version}}));
        }
    }
    return out;
}

} // namespace ultrachat::seeds
