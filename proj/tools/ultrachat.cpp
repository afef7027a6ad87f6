// SPDX-License-Identifier: Apache-2.0
// Command-line entry point for the dialogue-construction pipeline.
#include "ultrachat/core/errors.hpp"
#include "ultrachat/pipeline/config.hpp"
#include "ultrachat/pipeline/stages.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace ultrachat;
using namespace ultrachat::pipeline;

constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitBackend = 4;
constexpr int kExitHalted = 75;

struct Globals {
    std::string config_file;
    std::optional<std::int64_t> seed;
    std::string backend;
    std::optional<std::int64_t> concurrency;
    bool resume = false;
    std::string out_dir = "out";
    std::vector<std::string> sets;
    std::string log_level;
};

std::map<std::string, std::string> collect_overrides(const Globals& globals)
{
    std::map<std::string, std::string> overrides;
    for (const auto& assignment : globals.sets) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError(fmt::format("--set expects key=value, got '{}'", assignment));
        }
        overrides[assignment.substr(0, eq)] = assignment.substr(eq + 1);
    }
    if (globals.seed) {
        overrides["seed"] = std::to_string(*globals.seed);
    }
    if (!globals.backend.empty()) {
        overrides["backend.kind"] = globals.backend;
    }
    if (globals.concurrency) {
        overrides["runtime.concurrency"] = std::to_string(*globals.concurrency);
    }
    if (!globals.log_level.empty()) {
        overrides["runtime.log_level"] = globals.log_level;
    }
    return overrides;
}

std::vector<std::pair<std::string, std::filesystem::path>> parse_answers(const std::vector<std::string>& specs)
{
    std::vector<std::pair<std::string, std::filesystem::path>> answers;
    for (const auto& spec : specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw ConfigError(fmt::format("--answers expects model=path, got '{}'", spec));
        }
        answers.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
    }
    return answers;
}

void print_outcome(const StageOutcome& outcome)
{
    std::cout << fmt::format("{}: {}\n", outcome.stage, outcome.skipped ? "already complete" : "done");
    for (const auto& [name, value] : outcome.summary.counts) {
        std::cout << fmt::format("  {:<24} {}\n", name, value);
    }
    for (const auto& output : outcome.summary.outputs) {
        std::cout << fmt::format("  -> {}\n", output);
    }
}

void configure_logging(const Config& config)
{
    auto logger = spdlog::stderr_color_mt("ultrachat");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::from_str(config.text("runtime.log_level")));
}

std::string describe_schema()
{
    std::string out;
    for (const auto& key : config_schema()) {
        out += fmt::format("{:<36} {:<24} {}\n", key.name, key.fallback.dump(), key.help);
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Synthetic multi-turn dialogue construction: seeds, simulation, filtering, statistics, evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals globals;
    app.add_option("--config", globals.config_file, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--seed", globals.seed, "root seed");
    app.add_option("--backend", globals.backend, "backend kind")
        ->check(CLI::IsMember({"mock", "live", "http"}));
    app.add_option("--concurrency", globals.concurrency, "bound on in-flight record tasks")
        ->check(CLI::PositiveNumber);
    app.add_flag("--resume", globals.resume, "continue an interrupted stage from its checkpoint");
    app.add_option("--out-dir", globals.out_dir, "directory for every output file")->capture_default_str();
    app.add_option("--set", globals.sets, "override any config key (key=value, repeatable)");
    app.add_option("--log-level", globals.log_level, "trace, debug, info, warn, error or off");

    auto* seeds_cmd = app.add_subcommand("seeds", "generate opening-line pools and sample openings");
    auto* simulate_cmd = app.add_subcommand("simulate", "run user/assistant self-chat over the openings");
    std::optional<std::size_t> halt_after;
    simulate_cmd->add_option("--halt-after", halt_after, "stop abruptly after N openings (resume testing)")
        ->check(CLI::PositiveNumber);
    auto* filter_cmd = app.add_subcommand("filter", "strip politeness, apply the quality gate, dedup");
    auto* stats_cmd = app.add_subcommand("stats", "dataset statistics report");
    std::string stats_input;
    stats_cmd->add_option("--input", stats_input, "dataset file (default: filter output)");

    std::string items;
    std::vector<std::string> answer_specs;
    std::string model_a;
    std::string model_b;
    auto* compare_cmd = app.add_subcommand("eval-compare", "pairwise judge comparison of two models");
    compare_cmd->add_option("--items", items, "JSONL of {id, category, question}")->required();
    compare_cmd->add_option("--answers", answer_specs, "model=answers.jsonl (repeatable)")->required();
    compare_cmd->add_option("--model-a", model_a, "first model")->required();
    compare_cmd->add_option("--model-b", model_b, "second model")->required();

    std::vector<std::string> score_models;
    auto* score_cmd = app.add_subcommand("eval-score", "independent 1-10 judge scores");
    score_cmd->add_option("--items", items, "JSONL of {id, category, question}")->required();
    score_cmd->add_option("--answers", answer_specs, "model=answers.jsonl (repeatable)")->required();
    score_cmd->add_option("--model", score_models, "models to score (default: every answered model)");

    auto* truthful_cmd = app.add_subcommand("eval-truthfulqa", "true/false multiple-choice evaluation");
    truthful_cmd->add_option("--items", items, "JSONL or mc_task.json")->required();

    auto* report_cmd = app.add_subcommand("report", "summarize a run directory");
    auto* run_cmd = app.add_subcommand("run", "seeds, simulate, filter and stats in sequence");
    auto* config_cmd = app.add_subcommand("config", "print the effective configuration");
    bool show_keys = false;
    config_cmd->add_flag("--keys", show_keys, "list every key with its default instead");

    CLI11_PARSE(app, argc, argv);

    try {
        auto overrides = collect_overrides(globals);
        if (!stats_input.empty()) {
            overrides["stats.input"] = stats_input;
        }
        const std::optional<std::filesystem::path> file =
            globals.config_file.empty() ? std::nullopt : std::optional<std::filesystem::path>(globals.config_file);
        auto config = Config::load(file, overrides);
        configure_logging(config);

        if (config_cmd->parsed()) {
            std::cout << (show_keys ? describe_schema() : config.to_json().dump(2) + "\n");
            return EXIT_SUCCESS;
        }
        if (report_cmd->parsed()) {
            std::cout << run_report(globals.out_dir);
            return EXIT_SUCCESS;
        }

        RunOptions run{globals.out_dir, globals.resume, halt_after, {}};
        run.on_halt = [] {
            std::cerr << "halted before checkpoint\n";
            std::cerr.flush();
            // No unwinding: buffered output is lost, as in a real crash.
            std::_Exit(kExitHalted);
        };
        Pipeline pipeline(config, run);
        if (seeds_cmd->parsed()) {
            print_outcome(pipeline.seeds());
        } else if (simulate_cmd->parsed()) {
            print_outcome(pipeline.simulate());
        } else if (filter_cmd->parsed()) {
            print_outcome(pipeline.filter());
        } else if (stats_cmd->parsed()) {
            print_outcome(pipeline.stats());
            std::cout << ultrachat::read_file(pipeline.layout().stats_text());
        } else if (run_cmd->parsed()) {
            print_outcome(pipeline.seeds());
            print_outcome(pipeline.simulate());
            print_outcome(pipeline.filter());
            print_outcome(pipeline.stats());
        } else if (compare_cmd->parsed()) {
            print_outcome(pipeline.eval_compare({items, parse_answers(answer_specs), {model_a, model_b}}));
        } else if (score_cmd->parsed()) {
            auto answers = parse_answers(answer_specs);
            if (score_models.empty()) {
                for (const auto& [model, path] : answers) {
                    score_models.push_back(model);
                }
            }
            print_outcome(pipeline.eval_score({items, std::move(answers), score_models}));
        } else if (truthful_cmd->parsed()) {
            print_outcome(pipeline.eval_truthfulqa(items));
        }
        return EXIT_SUCCESS;
    } catch (const ConfigError& error) {
        std::cerr << "config error: " << error.what() << '\n';
        return kExitConfig;
    } catch (const InputError& error) {
        std::cerr << "input error: " << error.what() << '\n';
        return kExitInput;
    } catch (const ParseError& error) {
        std::cerr << "input error: " << error.what() << '\n';
        return kExitInput;
    } catch (const PreconditionError& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitConfig;
    } catch (const BackendError& error) {
        std::cerr << "backend error: " << error.what() << '\n';
        return kExitBackend;
    } catch (const PartialResultError& error) {
        std::cerr << "backend error: " << error.what() << '\n';
        return kExitBackend;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return EXIT_FAILURE;
    }
}
