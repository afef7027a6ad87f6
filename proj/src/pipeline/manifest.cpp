// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/pipeline/manifest.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/material.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/core/record_io.hpp"
#include "ultrachat/core/tokenizer.hpp"

#include <fmt/format.h>

#ifndef ULTRACHAT_VERSION
#define ULTRACHAT_VERSION "0.0.0"
#endif

namespace ultrachat::pipeline {

namespace {

using nlohmann::json;

json check(std::uint64_t in, std::uint64_t out, std::uint64_t rejects)
{
    return {{"in", in}, {"out", out}, {"rejects", rejects}, {"holds", in == out + rejects}};
}

} // namespace

std::string_view tool_version()
{
    return ULTRACHAT_VERSION;
}

Manifest Manifest::load_or_new(const std::filesystem::path& out_dir)
{
    Manifest manifest;
    const auto path = out_dir / "manifest.json";
    if (!std::filesystem::exists(path)) {
        return manifest;
    }
    try {
        const auto document = json::parse(read_file(path));
        manifest.config_ = document.value("config", json::object());
        for (const auto& [name, entry] : document.at("stages").items()) {
            StageSummary summary;
            summary.fingerprint = entry.at("fingerprint").get<std::string>();
            summary.counts = entry.at("counts").get<std::map<std::string, std::uint64_t>>();
            summary.outputs = entry.at("outputs").get<std::vector<std::string>>();
            manifest.stages_[name] = std::move(summary);
        }
    } catch (const json::exception& error) {
        throw InputError(fmt::format("corrupt run manifest {}: {}", path.string(), error.what()));
    }
    return manifest;
}

void Manifest::set_config(const Config& config)
{
    config_ = config.to_json();
}

void Manifest::record(std::string_view stage, StageSummary summary)
{
    stages_[std::string(stage)] = std::move(summary);
}

bool Manifest::has_stage(std::string_view stage) const
{
    return stages_.find(stage) != stages_.end();
}

json Manifest::conservation() const
{
    json out = json::object();
    const auto count = [&](std::string_view stage, const std::string& key) -> std::uint64_t {
        const auto it = stages_.find(stage);
        if (it == stages_.end()) {
            return 0;
        }
        const auto found = it->second.counts.find(key);
        return found == it->second.counts.end() ? 0 : found->second;
    };
    if (has_stage("simulate")) {
        out["simulate"] = check(count("simulate", "openings"), count("simulate", "dialogues"),
                                count("simulate", "rejects"));
    }
    if (has_stage("filter")) {
        out["filter"] = check(count("filter", "input"), count("filter", "kept"), count("filter", "rejects"));
    }
    if (has_stage("simulate") && has_stage("filter")) {
        out["pipeline"] = check(count("simulate", "openings"), count("filter", "kept"),
                                count("simulate", "rejects") + count("filter", "rejects"));
    }
    return out;
}

json Manifest::to_json() const
{
    json stages = json::object();
    for (const auto& [name, summary] : stages_) {
        stages[name] = {{"fingerprint", summary.fingerprint}, {"counts", summary.counts}, {"outputs", summary.outputs}};
    }
    return {{"tool", "ultrachat"},
            {"versions",
             {{"tool", tool_version()},
              {"prompt_catalog", prompts::kCatalogVersion},
              {"material_keywords", MaterialKeywordTable::standard().version()},
              {"tokenizer", default_tokenizer().name()}}},
            {"config", config_},
            {"stages", stages},
            {"conservation", conservation()}};
}

void Manifest::save(const std::filesystem::path& out_dir) const
{
    std::filesystem::create_directories(out_dir);
    write_file_atomic(out_dir / "manifest.json", to_json().dump(2) + "\n");
}

} // namespace ultrachat::pipeline
