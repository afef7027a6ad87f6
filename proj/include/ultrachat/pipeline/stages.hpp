// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/errors.hpp"
#include "ultrachat/gateway/backend_factory.hpp"
#include "ultrachat/pipeline/config.hpp"
#include "ultrachat/pipeline/job_state.hpp"
#include "ultrachat/pipeline/manifest.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ultrachat::pipeline {

/// Raised by the simulate stage when --halt-after is reached, to exercise resume.
class SimulatedCrash : public Error {
public:
    using Error::Error;
};

/// File locations under the output directory.
struct Layout {
    std::filesystem::path root;

    std::filesystem::path world_pool() const { return root / "seeds" / "pool_world.jsonl"; }
    std::filesystem::path creation_pool() const { return root / "seeds" / "pool_creation.jsonl"; }
    std::filesystem::path material_pool() const { return root / "seeds" / "pool_material.jsonl"; }
    std::filesystem::path openings() const { return root / "seeds" / "openings.jsonl"; }
    std::filesystem::path simulated() const { return root / "simulate" / "dialogues.jsonl"; }
    std::filesystem::path simulate_rejects() const { return root / "simulate" / "rejects.jsonl"; }
    std::filesystem::path filtered() const { return root / "filter" / "dialogues.jsonl"; }
    std::filesystem::path filter_rejects() const { return root / "filter" / "rejects.jsonl"; }
    std::filesystem::path filter_report() const { return root / "filter" / "report.json"; }
    std::filesystem::path stats_json() const { return root / "stats" / "report.json"; }
    std::filesystem::path stats_text() const { return root / "stats" / "report.txt"; }
    std::filesystem::path eval_dir() const { return root / "eval"; }
};

struct RunOptions {
    std::filesystem::path out_dir = "out";
    /// Continue an interrupted stage from its last checkpoint.
    bool resume = false;
    /// Simulate stage only: stop once this many openings are done, without
    /// checkpointing. Calls `on_halt` if set, else throws SimulatedCrash.
    std::optional<std::size_t> halt_after;
    std::function<void()> on_halt;
};

struct StageOutcome {
    std::string stage;
    /// The stage had already completed with the same fingerprint.
    bool skipped = false;
    StageSummary summary;
};

/// Evaluation inputs: an item set plus one answer file per model.
struct EvalInputs {
    std::filesystem::path items;
    std::vector<std::pair<std::string, std::filesystem::path>> answers;
    /// Pairwise needs exactly two (model_a, model_b); scoring takes any number.
    std::vector<std::string> models;
};

class Pipeline {
public:
    Pipeline(Config config, RunOptions options);
    /// Uses the given backends instead of building them from the config.
    Pipeline(Config config, RunOptions options, BackendSet backends);

    const Config& config() const { return config_; }
    const Layout& layout() const { return layout_; }

    StageOutcome seeds();
    StageOutcome simulate();
    StageOutcome filter();
    StageOutcome stats();
    StageOutcome eval_compare(const EvalInputs& inputs);
    StageOutcome eval_score(const EvalInputs& inputs);
    StageOutcome eval_truthfulqa(const std::filesystem::path& items);

private:
    BackendSet& backends();
    std::string created_at() const;
    std::optional<StageOutcome> completed_before(Stage stage, const std::string& fingerprint,
                                                 const std::vector<std::string>& outputs) const;
    StageOutcome finish(JobState& state, const std::vector<std::string>& outputs);
    StageOutcome record_eval(const std::string& name, StageSummary summary);

    Config config_;
    RunOptions options_;
    Layout layout_;
    std::optional<BackendSet> backends_;
};

/// Human-readable summary of a run directory: stage counts, conservation and
/// the stats table when present. Throws InputError without a manifest.
std::string run_report(const std::filesystem::path& out_dir);

} // namespace ultrachat::pipeline
