// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ultrachat {

class Tokenizer;

using Record = std::variant<OpeningLine, Dialogue>;

/// A dialogue that did not make it into a stage's output, with the reason.
struct RejectRecord {
    std::string stage;
    std::string reason;
    std::string error;
    Dialogue dialogue;

    bool operator==(const RejectRecord&) const = default;
};

nlohmann::json to_json(const OpeningLine& opening);
nlohmann::json to_json(const Dialogue& dialogue);
nlohmann::json to_json(const RejectRecord& reject);

std::string serialize_record(const OpeningLine& opening);
std::string serialize_record(const Dialogue& dialogue);
std::string serialize_record(const Record& record);
std::string serialize_record(const RejectRecord& reject);

/// Parses one JSONL line. Token counts are recomputed under `tokenizer` and
/// must match the stored values. Throws ParseError carrying `line_number`.
Record deserialize_record(std::string_view line, std::size_t line_number = 1);
Record deserialize_record(std::string_view line, std::size_t line_number, const Tokenizer& tokenizer);
RejectRecord deserialize_reject(std::string_view line, std::size_t line_number = 1);

/// Calls `visit(line, line_number)` for each non-blank line. Throws InputError if unreadable.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& visit);

std::vector<OpeningLine> read_openings(const std::filesystem::path& path);
std::vector<Dialogue> read_dialogues(const std::filesystem::path& path);
std::vector<RejectRecord> read_rejects(const std::filesystem::path& path);

void write_openings(const std::filesystem::path& path, const std::vector<OpeningLine>& openings);
void write_dialogues(const std::filesystem::path& path, const std::vector<Dialogue>& dialogues);

/// Writes via a temporary file and rename, so readers never see a torn file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Append-only line writer that tracks its byte offset for checkpointing.
class JsonlWriter {
public:
    /// Opens `path`, first truncating it to `keep_bytes` (0 starts fresh).
    JsonlWriter(const std::filesystem::path& path, std::uint64_t keep_bytes = 0);

    void write_line(std::string_view line);
    void flush();
    std::uint64_t bytes() const { return bytes_; }

private:
    std::ofstream out_;
    std::uint64_t bytes_ = 0;
};

} // namespace ultrachat
