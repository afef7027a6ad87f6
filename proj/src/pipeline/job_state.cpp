// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/pipeline/job_state.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/hash.hpp"
#include "ultrachat/core/record_io.hpp"

#include <fmt/format.h>

#include <array>

namespace ultrachat::pipeline {

namespace {

constexpr std::array<std::string_view, 5> kStageNames = {"seeds", "simulate", "filter", "stats", "eval"};

} // namespace

std::string_view to_string(Stage stage)
{
    return kStageNames[static_cast<std::size_t>(stage)];
}

Stage stage_from_string(std::string_view name)
{
    for (std::size_t i = 0; i < kStageNames.size(); ++i) {
        if (kStageNames[i] == name) {
            return static_cast<Stage>(i);
        }
    }
    throw ConfigError(fmt::format("unknown stage '{}'", name));
}

JobState::JobState(Stage stage, std::string fingerprint)
    : stage_(stage), fingerprint_(std::move(fingerprint)),
      job_id_(content_id("job-", {to_string(stage), fingerprint_}))
{
}

void JobState::complete(const std::string& record_id)
{
    if (!index_.insert(record_id).second) {
        throw PreconditionError(fmt::format("record {} already completed in stage {}", record_id, to_string(stage_)));
    }
    completed_.push_back(record_id);
}

nlohmann::json JobState::to_json() const
{
    return {{"job_id", job_id_},         {"stage", to_string(stage_)}, {"fingerprint", fingerprint_},
            {"done", done_},             {"counters", counters_},      {"offsets", offsets_},
            {"completed", completed_}};
}

JobState JobState::from_json(const nlohmann::json& json)
{
    JobState state(stage_from_string(json.at("stage").get<std::string>()), json.at("fingerprint").get<std::string>());
    if (json.at("job_id").get<std::string>() != state.job_id_) {
        throw InputError(fmt::format("job state for stage {} has an inconsistent job id", to_string(state.stage_)));
    }
    for (const auto& id : json.at("completed")) {
        state.complete(id.get<std::string>());
    }
    state.counters_ = json.at("counters").get<std::map<std::string, std::uint64_t>>();
    state.offsets_ = json.at("offsets").get<std::map<std::string, std::uint64_t>>();
    state.done_ = json.at("done").get<bool>();
    return state;
}

std::filesystem::path state_path(const std::filesystem::path& out_dir, Stage stage)
{
    return out_dir / "state" / fmt::format("{}.json", to_string(stage));
}

std::optional<JobState> load_state(const std::filesystem::path& out_dir, Stage stage)
{
    const auto path = state_path(out_dir, stage);
    if (!std::filesystem::exists(path)) {
        return std::nullopt;
    }
    try {
        auto state = JobState::from_json(nlohmann::json::parse(read_file(path)));
        if (state.stage() != stage) {
            throw InputError(fmt::format("{} holds state for stage {}", path.string(), to_string(state.stage())));
        }
        return state;
    } catch (const nlohmann::json::exception& error) {
        throw InputError(fmt::format("corrupt job state {}: {}", path.string(), error.what()));
    }
}

void save_state(const std::filesystem::path& out_dir, const JobState& state)
{
    const auto path = state_path(out_dir, state.stage());
    std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path, state.to_json().dump(2) + "\n");
}

void require_same_fingerprint(const JobState& stored, const std::string& current)
{
    if (stored.fingerprint() != current) {
        throw ConfigError(fmt::format(
            "refusing to resume stage {}: the configuration changed since the interrupted run "
            "(fingerprint {} on disk, {} now). Restore the original settings, or rerun without --resume "
            "to start the stage over.",
            to_string(stored.stage()), stored.fingerprint(), current));
    }
}

} // namespace ultrachat::pipeline
