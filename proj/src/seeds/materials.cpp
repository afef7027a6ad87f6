// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/seeds/materials.hpp"

#include "ultrachat/core/embedded_data.hpp"
#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/hash.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/core/record_io.hpp"
#include "ultrachat/core/rng.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ultrachat::seeds {

std::vector<RawPiece> parse_corpus(std::string_view text)
{
    std::vector<RawPiece> out;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty()) {
            continue;
        }
        try {
            const auto json = nlohmann::json::parse(line);
            out.push_back({json.at("url").get<std::string>(), json.at("text").get<std::string>()});
        } catch (const nlohmann::json::exception& error) {
            throw ParseError(line_no, fmt::format("corpus line needs string fields url and text: {}", error.what()));
        }
    }
    return out;
}

std::vector<RawPiece> load_corpus(const std::filesystem::path& path)
{
    return parse_corpus(read_file(path));
}

std::vector<RawPiece> sample_corpus()
{
    return parse_corpus(embedded_file("sample_corpus.jsonl").value());
}

std::optional<MaterialType> classify_piece(std::string_view url, std::string_view /*body*/,
                                           const MaterialKeywordTable& table)
{
    if (url.empty()) {
        throw PreconditionError("classify_piece needs a non-empty URL");
    }
    const auto lowered = ascii_lower(url);
    std::optional<MaterialType> best;
    std::size_t best_hits = 0;
    for (const auto type : all_material_types()) {
        std::size_t hits = 0;
        for (const auto& keyword : table.keywords(type)) {
            hits += lowered.find(keyword) != std::string::npos ? 1 : 0;
        }
        if (hits > best_hits) {
            best_hits = hits;
            best = type;
        }
    }
    return best;
}

std::vector<TextPiece> classify_corpus(const std::vector<RawPiece>& raw, const MaterialKeywordTable& table,
                                       std::size_t limit)
{
    std::vector<TextPiece> out;
    for (const auto& piece : raw) {
        if (limit != 0 && out.size() == limit) {
            break;
        }
        if (piece.url.empty() || trim(piece.text).empty()) {
            continue;
        }
        if (auto type = classify_piece(piece.url, piece.text, table)) {
            out.push_back({content_id("piece-", {piece.url, piece.text}), piece.url, piece.text, *type});
        }
    }
    return out;
}

const std::array<ConcatTemplate, kConcatTemplateCount>& concat_templates()
{
    static const std::array<ConcatTemplate, kConcatTemplateCount> templates = {{
        {1, "{text}\n{instruction}"},
        {2, "{text} {instruction}"},
        {3, "{instruction} Answer according to: {text}"},
        {4, "{text} Based on the passage above, {instruction}"},
        {5, "{instruction}: {text}"},
        {6, "Given the text: {text}\n{instruction}"},
        {7, "{instruction}\nGenerate according to: {text}"},
    }};
    return templates;
}

std::string render_concat(int template_id, std::string_view text, std::string_view instruction)
{
    if (template_id < 1 || template_id > static_cast<int>(kConcatTemplateCount)) {
        throw PreconditionError(fmt::format("template id {} is outside 1..7", template_id));
    }
    return prompts::render(concat_templates()[static_cast<std::size_t>(template_id - 1)].pattern,
                           {{"text", text}, {"instruction", instruction}});
}

int choose_template(std::uint64_t seed, std::string_view piece_id, std::string_view instruction)
{
    Rng rng(derive_seed(seed, "template", std::string(piece_id) + '\x1f' + std::string(instruction)));
    return static_cast<int>(rng.below(kConcatTemplateCount)) + 1;
}

OpeningLine concat_material(const TextPiece& piece, std::string_view instruction, int template_id)
{
    auto text = render_concat(template_id, piece.body, instruction);
    return make_opening(Sector::material_assistance, std::move(text),
                        {{"material-type", std::string(slug(piece.material_type))},
                         {"piece", piece.id},
                         {"source-url", piece.source_url},
                         {"instruction", std::string(instruction)},
                         {"template-id", std::to_string(template_id)}});
}

std::string replay_material_opening(const OpeningLine& opening, const TextPiece& piece)
{
    std::string instruction;
    int template_id = 0;
    for (const auto& step : opening.lineage) {
        if (step.stage == "instruction") {
            instruction = step.value;
        } else if (step.stage == "template-id") {
            template_id = std::stoi(step.value);
        }
    }
    return render_concat(template_id, piece.body, instruction);
}

std::vector<std::string> material_instructions(const TextPiece& piece, std::size_t n, ChatBackend& backend,
                                               const GenerationOptions& options)
{
    if (n < 1) {
        throw PreconditionError("material_instructions needs n >= 1");
    }
    return collect_distinct(
        backend, n,
        [&](std::size_t missing, std::size_t attempt) { return prompts::material_instructions(piece.body, missing, attempt); },
        {}, options, fmt::format("instructions for {}", piece.id));
}

} // namespace ultrachat::seeds
