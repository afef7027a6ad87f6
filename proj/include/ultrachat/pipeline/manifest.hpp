// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/pipeline/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat::pipeline {

std::string_view tool_version();

struct StageSummary {
    std::string fingerprint;
    std::map<std::string, std::uint64_t> counts;
    /// Output files relative to the output directory.
    std::vector<std::string> outputs;
};

/// The run manifest at <out>/manifest.json: effective config, component
/// versions, per-stage counts and the record conservation checks. It holds no
/// timestamps, so identical runs write identical manifests.
class Manifest {
public:
    static Manifest load_or_new(const std::filesystem::path& out_dir);

    void set_config(const Config& config);
    void record(std::string_view stage, StageSummary summary);
    bool has_stage(std::string_view stage) const;

    /// One entry per check that has the counts it needs; "holds" is
    /// in == out + rejects.
    nlohmann::json conservation() const;

    nlohmann::json to_json() const;
    void save(const std::filesystem::path& out_dir) const;

private:
    nlohmann::json config_ = nlohmann::json::object();
    std::map<std::string, StageSummary, std::less<>> stages_;
};

} // namespace ultrachat::pipeline
