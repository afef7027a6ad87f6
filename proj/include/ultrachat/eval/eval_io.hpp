// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/eval/judge.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace ultrachat::eval {

/// JSONL with {"id", "category", "question"}. Throws ParseError on bad lines
/// and InputError on duplicate ids.
std::vector<EvalItem> load_eval_set(const std::filesystem::path& path);

/// JSONL with {"id", "answer"}; answers for unknown ids are ignored.
/// Returns how many items received an answer.
std::size_t attach_answers(std::vector<EvalItem>& items, const std::string& model, const std::filesystem::path& path);

nlohmann::json to_json(const JudgeVerdict& verdict);
JudgeVerdict verdict_from_json(const nlohmann::json& json);

void write_verdicts(const std::filesystem::path& path, const std::vector<JudgeVerdict>& verdicts);
std::vector<JudgeVerdict> read_verdicts(const std::filesystem::path& path);

} // namespace ultrachat::eval
