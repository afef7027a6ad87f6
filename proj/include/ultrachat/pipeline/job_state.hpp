// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace ultrachat::pipeline {

enum class Stage { seeds, simulate, filter, stats, eval };

std::string_view to_string(Stage stage);
/// Throws ConfigError on an unknown name.
Stage stage_from_string(std::string_view name);

/// Progress of one stage in an output directory. Completed ids only grow.
class JobState {
public:
    JobState(Stage stage, std::string fingerprint);

    Stage stage() const { return stage_; }
    const std::string& job_id() const { return job_id_; }
    const std::string& fingerprint() const { return fingerprint_; }

    /// Throws PreconditionError if the id is already complete.
    void complete(const std::string& record_id);
    bool is_complete(const std::string& record_id) const { return index_.count(record_id) != 0; }
    const std::vector<std::string>& completed() const { return completed_; }

    std::map<std::string, std::uint64_t>& counters() { return counters_; }
    const std::map<std::string, std::uint64_t>& counters() const { return counters_; }

    /// Byte length of each output file at the last checkpoint.
    std::map<std::string, std::uint64_t>& offsets() { return offsets_; }
    const std::map<std::string, std::uint64_t>& offsets() const { return offsets_; }

    bool done() const { return done_; }
    void mark_done() { done_ = true; }

    nlohmann::json to_json() const;
    static JobState from_json(const nlohmann::json& json);

private:
    Stage stage_;
    std::string fingerprint_;
    std::string job_id_;
    std::vector<std::string> completed_;
    std::unordered_set<std::string> index_;
    std::map<std::string, std::uint64_t> counters_;
    std::map<std::string, std::uint64_t> offsets_;
    bool done_ = false;
};

std::filesystem::path state_path(const std::filesystem::path& out_dir, Stage stage);

std::optional<JobState> load_state(const std::filesystem::path& out_dir, Stage stage);
/// Atomic replace.
void save_state(const std::filesystem::path& out_dir, const JobState& state);

/// Throws ConfigError explaining the mismatch when the stored fingerprint
/// differs from the current one.
void require_same_fingerprint(const JobState& stored, const std::string& current);

} // namespace ultrachat::pipeline
