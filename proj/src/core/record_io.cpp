// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/record_io.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/tokenizer.hpp"

#include <fmt/format.h>

#include <atomic>
#include <sstream>
#include <thread>

namespace ultrachat {

using nlohmann::json;

namespace {

const json& require(const json& object, const char* key, std::size_t line)
{
    auto it = object.find(key);
    if (it == object.end()) {
        throw ParseError(line, fmt::format("missing field '{}'", key));
    }
    return *it;
}

std::string require_string(const json& object, const char* key, std::size_t line)
{
    const auto& value = require(object, key, line);
    if (!value.is_string()) {
        throw ParseError(line, fmt::format("field '{}' must be a string", key));
    }
    return value.get<std::string>();
}

template <typename Fn>
auto wrap_enum(std::size_t line, Fn fn)
{
    try {
        return fn();
    } catch (const PreconditionError& e) {
        throw ParseError(line, e.what());
    }
}

json parse_object(std::string_view text, std::size_t line)
{
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(line, fmt::format("invalid JSON: {}", e.what()));
    }
    if (!value.is_object()) {
        throw ParseError(line, "record must be a JSON object");
    }
    return value;
}

OpeningLine opening_from_json(const json& value, std::size_t line)
{
    OpeningLine opening;
    opening.id = require_string(value, "id", line);
    opening.sector = wrap_enum(line, [&] { return sector_from_string(require_string(value, "sector", line)); });
    opening.text = require_string(value, "text", line);
    const auto& lineage = require(value, "lineage", line);
    if (!lineage.is_array()) {
        throw ParseError(line, "field 'lineage' must be an array");
    }
    for (const auto& step : lineage) {
        if (!step.is_array() || step.size() != 2 || !step[0].is_string() || !step[1].is_string()) {
            throw ParseError(line, "lineage steps must be [stage, value] string pairs");
        }
        opening.lineage.push_back({step[0].get<std::string>(), step[1].get<std::string>()});
    }
    return opening;
}

Dialogue dialogue_from_json(const json& value, std::size_t line, const Tokenizer& tokenizer)
{
    Dialogue dialogue;
    dialogue.id = require_string(value, "id", line);
    dialogue.sector = wrap_enum(line, [&] { return sector_from_string(require_string(value, "sector", line)); });
    dialogue.opening_id = require_string(value, "opening_id", line);
    dialogue.persona_id = require_string(value, "persona_id", line);
    dialogue.backend_fingerprint = require_string(value, "backend", line);
    dialogue.created_at = require_string(value, "created_at", line);
    const auto& turns = require(value, "turns", line);
    if (!turns.is_array()) {
        throw ParseError(line, "field 'turns' must be an array");
    }
    std::size_t index = 0;
    for (const auto& item : turns) {
        if (!item.is_object()) {
            throw ParseError(line, "turns must be objects");
        }
        Turn turn;
        turn.role = wrap_enum(line, [&] { return role_from_string(require_string(item, "role", line)); });
        turn.content = require_string(item, "content", line);
        const auto& tokens = require(item, "tokens", line);
        if (!tokens.is_number_unsigned()) {
            throw ParseError(line, "field 'tokens' must be a nonnegative integer");
        }
        turn.token_count = tokens.get<std::size_t>();
        const auto expected = tokenizer.count(turn.content);
        if (expected != turn.token_count) {
            throw ParseError(line, fmt::format("turn {} stores {} tokens but {} counts {}", index, turn.token_count,
                                               tokenizer.name(), expected));
        }
        dialogue.turns.push_back(std::move(turn));
        ++index;
    }
    return dialogue;
}

std::string dump(const json& value)
{
    // Escapes control characters, so a record never spans lines.
    return value.dump(-1, ' ', false, json::error_handler_t::strict);
}

} // namespace

json to_json(const OpeningLine& opening)
{
    json lineage = json::array();
    for (const auto& step : opening.lineage) {
        lineage.push_back(json::array({step.stage, step.value}));
    }
    return json{{"kind", "opening"},
                {"id", opening.id},
                {"sector", to_string(opening.sector)},
                {"text", opening.text},
                {"lineage", std::move(lineage)}};
}

json to_json(const Dialogue& dialogue)
{
    json turns = json::array();
    for (const auto& turn : dialogue.turns) {
        turns.push_back({{"role", to_string(turn.role)}, {"content", turn.content}, {"tokens", turn.token_count}});
    }
    return json{{"kind", "dialogue"},
                {"id", dialogue.id},
                {"sector", to_string(dialogue.sector)},
                {"opening_id", dialogue.opening_id},
                {"persona_id", dialogue.persona_id},
                {"backend", dialogue.backend_fingerprint},
                {"created_at", dialogue.created_at},
                {"turns", std::move(turns)}};
}

json to_json(const RejectRecord& reject)
{
    return json{{"kind", "reject"},
                {"stage", reject.stage},
                {"reason", reject.reason},
                {"error", reject.error},
                {"dialogue", to_json(reject.dialogue)}};
}

std::string serialize_record(const OpeningLine& opening)
{
    return dump(to_json(opening));
}

std::string serialize_record(const Dialogue& dialogue)
{
    return dump(to_json(dialogue));
}

std::string serialize_record(const Record& record)
{
    return std::visit([](const auto& value) { return serialize_record(value); }, record);
}

std::string serialize_record(const RejectRecord& reject)
{
    return dump(to_json(reject));
}

Record deserialize_record(std::string_view line, std::size_t line_number)
{
    return deserialize_record(line, line_number, default_tokenizer());
}

Record deserialize_record(std::string_view line, std::size_t line_number, const Tokenizer& tokenizer)
{
    const json value = parse_object(line, line_number);
    const auto kind = require_string(value, "kind", line_number);
    if (kind == "opening") {
        return opening_from_json(value, line_number);
    }
    if (kind == "dialogue") {
        return dialogue_from_json(value, line_number, tokenizer);
    }
    throw ParseError(line_number, fmt::format("unknown record kind '{}'", kind));
}

RejectRecord deserialize_reject(std::string_view line, std::size_t line_number)
{
    const json value = parse_object(line, line_number);
    if (require_string(value, "kind", line_number) != "reject") {
        throw ParseError(line_number, "expected a reject record");
    }
    RejectRecord reject;
    reject.stage = require_string(value, "stage", line_number);
    reject.reason = require_string(value, "reason", line_number);
    reject.error = require_string(value, "error", line_number);
    const auto& dialogue = require(value, "dialogue", line_number);
    if (!dialogue.is_object()) {
        throw ParseError(line_number, "field 'dialogue' must be an object");
    }
    reject.dialogue = dialogue_from_json(dialogue, line_number, default_tokenizer());
    return reject;
}

void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& visit)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(fmt::format("cannot open '{}'", path.string()));
    }
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        visit(line, number);
    }
}

namespace {

template <typename T>
std::vector<T> read_kind(const std::filesystem::path& path, const char* expected)
{
    std::vector<T> out;
    for_each_line(path, [&](std::string_view line, std::size_t number) {
        auto record = deserialize_record(line, number);
        if (auto* value = std::get_if<T>(&record)) {
            out.push_back(std::move(*value));
        } else {
            throw ParseError(number, fmt::format("expected a {} record", expected));
        }
    });
    return out;
}

} // namespace

std::vector<OpeningLine> read_openings(const std::filesystem::path& path)
{
    return read_kind<OpeningLine>(path, "opening");
}

std::vector<Dialogue> read_dialogues(const std::filesystem::path& path)
{
    return read_kind<Dialogue>(path, "dialogue");
}

std::vector<RejectRecord> read_rejects(const std::filesystem::path& path)
{
    std::vector<RejectRecord> out;
    for_each_line(path, [&](std::string_view line, std::size_t number) { out.push_back(deserialize_reject(line, number)); });
    return out;
}

void write_openings(const std::filesystem::path& path, const std::vector<OpeningLine>& openings)
{
    std::string content;
    for (const auto& opening : openings) {
        content += serialize_record(opening);
        content.push_back('\n');
    }
    write_file_atomic(path, content);
}

void write_dialogues(const std::filesystem::path& path, const std::vector<Dialogue>& dialogues)
{
    std::string content;
    for (const auto& dialogue : dialogues) {
        content += serialize_record(dialogue);
        content.push_back('\n');
    }
    write_file_atomic(path, content);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    static std::atomic<unsigned> counter{0};
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ostringstream suffix;
    suffix << ".tmp." << std::this_thread::get_id() << '.' << counter.fetch_add(1);
    auto temp = path;
    temp += suffix.str();
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InputError(fmt::format("cannot write '{}'", temp.string()));
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw InputError(fmt::format("short write to '{}'", temp.string()));
        }
    }
    std::filesystem::rename(temp, path);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path, std::uint64_t keep_bytes)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    if (keep_bytes == 0 || !std::filesystem::exists(path)) {
        std::ofstream(path, std::ios::binary | std::ios::trunc).flush();
        keep_bytes = 0;
    } else {
        std::filesystem::resize_file(path, keep_bytes);
    }
    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) {
        throw InputError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    bytes_ = keep_bytes;
}

void JsonlWriter::write_line(std::string_view line)
{
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.put('\n');
    bytes_ += line.size() + 1;
}

void JsonlWriter::flush()
{
    out_.flush();
    if (!out_) {
        throw InputError("write failed");
    }
}

} // namespace ultrachat
