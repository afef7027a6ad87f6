// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/pipeline/stages.hpp"

#include "ultrachat/core/hash.hpp"
#include "ultrachat/core/material.hpp"
#include "ultrachat/core/parallel.hpp"
#include "ultrachat/core/record_io.hpp"
#include "ultrachat/core/rng.hpp"
#include "ultrachat/core/tokenizer.hpp"
#include "ultrachat/eval/eval_io.hpp"
#include "ultrachat/eval/tally.hpp"
#include "ultrachat/eval/truthfulqa.hpp"
#include "ultrachat/refine/politeness.hpp"
#include "ultrachat/refine/quality.hpp"
#include "ultrachat/seeds/entities.hpp"
#include "ultrachat/seeds/materials.hpp"
#include "ultrachat/seeds/sampling.hpp"
#include "ultrachat/seeds/topics.hpp"
#include "ultrachat/seeds/writing.hpp"
#include "ultrachat/simulate/persona.hpp"
#include "ultrachat/simulate/simulator.hpp"
#include "ultrachat/stats/report.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <unordered_set>

namespace ultrachat::pipeline {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kEpoch = "1970-01-01T00:00:00Z";

std::string relative(const Layout& layout, const fs::path& path)
{
    return path.lexically_relative(layout.root).generic_string();
}

void require_input(const fs::path& path, std::string_view producer)
{
    if (!fs::exists(path)) {
        throw InputError(fmt::format("missing input: expected {} (produced by the {} stage)", path.string(), producer));
    }
}

/// Stage fingerprint: the config subset plus the bytes of the stage input.
std::string stage_fingerprint(const Config& config, const std::vector<std::string>& prefixes,
                              const std::vector<fs::path>& inputs)
{
    std::string material = config.fingerprint(prefixes);
    for (const auto& input : inputs) {
        material += '\x1f';
        material += sha256_hex(read_file(input));
    }
    return sha256_hex(material).substr(0, 32);
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines)
{
    std::string content;
    for (const auto& line : lines) {
        content += line;
        content += '\n';
    }
    fs::create_directories(path.parent_path());
    write_file_atomic(path, content);
}

template <typename T>
void append(std::vector<T>& into, std::vector<T> from)
{
    into.insert(into.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

std::uint64_t file_size_or_zero(const fs::path& path)
{
    return fs::exists(path) ? fs::file_size(path) : 0;
}

} // namespace

Pipeline::Pipeline(Config config, RunOptions options)
    : config_(std::move(config)), options_(std::move(options)), layout_{options_.out_dir}
{
}

Pipeline::Pipeline(Config config, RunOptions options, BackendSet backends)
    : config_(std::move(config)), options_(std::move(options)), layout_{options_.out_dir},
      backends_(std::move(backends))
{
}

BackendSet& Pipeline::backends()
{
    if (!backends_) {
        backends_ = make_backends(config_.backend());
    }
    return *backends_;
}

std::string Pipeline::created_at() const
{
    const auto& mode = config_.text("runtime.timestamps");
    if (mode == "fixed" || (mode == "auto" && config_.backend().kind == "mock")) {
        return std::string(kEpoch);
    }
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

std::optional<StageOutcome> Pipeline::completed_before(Stage stage, const std::string& fingerprint,
                                                       const std::vector<std::string>& outputs) const
{
    const auto prior = load_state(layout_.root, stage);
    if (!prior) {
        return std::nullopt;
    }
    if (options_.resume) {
        require_same_fingerprint(*prior, fingerprint);
    }
    if (!prior->done() || prior->fingerprint() != fingerprint) {
        return std::nullopt;
    }
    for (const auto& output : outputs) {
        if (!fs::exists(layout_.root / output)) {
            return std::nullopt;
        }
    }
    spdlog::info("{} stage already complete for this configuration; nothing to do", to_string(stage));
    StageOutcome outcome{std::string(to_string(stage)), true, {fingerprint, prior->counters(), outputs}};
    auto manifest = Manifest::load_or_new(layout_.root);
    manifest.set_config(config_);
    manifest.record(outcome.stage, outcome.summary);
    manifest.save(layout_.root);
    return outcome;
}

StageOutcome Pipeline::finish(JobState& state, const std::vector<std::string>& outputs)
{
    state.mark_done();
    save_state(layout_.root, state);
    StageOutcome outcome{std::string(to_string(state.stage())), false, {state.fingerprint(), state.counters(), outputs}};
    auto manifest = Manifest::load_or_new(layout_.root);
    manifest.set_config(config_);
    manifest.record(outcome.stage, outcome.summary);
    manifest.save(layout_.root);
    return outcome;
}

StageOutcome Pipeline::seeds()
{
    const std::vector<std::string> outputs = {
        relative(layout_, layout_.world_pool()), relative(layout_, layout_.creation_pool()),
        relative(layout_, layout_.material_pool()), relative(layout_, layout_.openings())};
    std::vector<fs::path> inputs;
    for (const auto* key : {"seeds.entity_file", "seeds.corpus_file"}) {
        if (!config_.text(key).empty()) {
            require_input(config_.text(key), "user-supplied");
            inputs.emplace_back(config_.text(key));
        }
    }
    const auto fingerprint = stage_fingerprint(config_, {"seeds"}, inputs);
    if (auto done = completed_before(Stage::seeds, fingerprint, outputs)) {
        return *done;
    }

    const std::uint64_t seed = config_.seed();
    auto& backend = *backends().user;
    const auto options = config_.generation();
    auto single = options;
    single.concurrency = 1;
    const std::size_t workers = config_.concurrency();

    // Sector 1: topic tree plus entity questions.
    const auto& topics = seeds::standard_meta_topics();
    const auto meta_count = config_.count("seeds.meta_topics");
    if (meta_count > topics.size()) {
        throw ConfigError(fmt::format("seeds.meta_topics is {} but only {} meta-topics exist", meta_count, topics.size()));
    }
    std::vector<OpeningLine> world;
    for (std::size_t i = 0; i < meta_count; ++i) {
        spdlog::info("expanding meta-topic '{}'", topics[i]);
        append(world, seeds::world_openings(seeds::meta_topic(topics[i]), config_.fanout(), backend, options));
    }
    const auto entity_total = config_.count("seeds.entities");
    if (entity_total > 0) {
        auto entities = config_.text("seeds.entity_file").empty() ? seeds::sample_entities()
                                                                  : seeds::load_entities(config_.text("seeds.entity_file"));
        std::stable_sort(entities.begin(), entities.end(),
                         [](const auto& a, const auto& b) { return a.rank < b.rank; });
        if (entity_total > entities.size()) {
            throw ConfigError(
                fmt::format("seeds.entities is {} but the entity list has {}", entity_total, entities.size()));
        }
        const auto counts = config_.entity_counts();
        auto per_entity = parallel_map<std::vector<OpeningLine>>(entity_total, workers, [&](std::size_t i) {
            return seeds::entity_openings(entities[i], seeds::entity_questions(entities[i], counts, backend, single));
        });
        for (auto& batch : per_entity) {
            append(world, std::move(batch));
        }
    }
    write_openings(layout_.world_pool(), world);

    // Sector 2: writing instructions for every material type.
    const auto& types = all_material_types();
    const auto per_type = config_.count("seeds.instructions_per_type");
    const double fraction = config_.real("seeds.refine_fraction");
    auto by_type = parallel_map<std::vector<OpeningLine>>(types.size(), workers, [&](std::size_t i) {
        return seeds::writing_instructions(types[i], per_type, fraction, backend, seed, single);
    });
    std::vector<OpeningLine> creation;
    for (auto& batch : by_type) {
        append(creation, std::move(batch));
    }
    write_openings(layout_.creation_pool(), creation);

    // Sector 3: instructions over classified corpus pieces.
    const auto raw = config_.text("seeds.corpus_file").empty() ? seeds::sample_corpus()
                                                               : seeds::load_corpus(config_.text("seeds.corpus_file"));
    const auto pieces =
        seeds::classify_corpus(raw, MaterialKeywordTable::standard(), config_.count("seeds.pieces_limit"));
    const auto per_piece = config_.count("seeds.instructions_per_piece");
    auto by_piece = parallel_map<std::vector<OpeningLine>>(pieces.size(), workers, [&](std::size_t i) {
        std::vector<OpeningLine> out;
        for (const auto& instruction : seeds::material_instructions(pieces[i], per_piece, backend, single)) {
            out.push_back(seeds::concat_material(pieces[i], instruction,
                                                 seeds::choose_template(seed, pieces[i].id, instruction)));
        }
        return out;
    });
    std::vector<OpeningLine> material;
    for (auto& batch : by_piece) {
        append(material, std::move(batch));
    }
    write_openings(layout_.material_pool(), material);

    // Length filter, then a seeded sample per sector.
    const auto min_chars = config_.count("seeds.min_opening_chars");
    const auto max_chars = config_.count("seeds.max_opening_chars");
    const auto sample = [&](const std::vector<OpeningLine>& pool, Sector sector, const char* key) {
        const auto eligible = seeds::within_length(pool, min_chars, max_chars);
        return seeds::sample_openings(eligible, config_.count(key), derive_seed(seed, "sample", to_string(sector)));
    };
    auto world_sample = sample(world, Sector::world_questions, "seeds.world_sample");
    auto creation_sample = sample(creation, Sector::creation_generation, "seeds.creation_sample");
    auto material_sample = sample(material, Sector::material_assistance, "seeds.material_sample");

    JobState state(Stage::seeds, fingerprint);
    auto& counters = state.counters();
    counters["pool_world"] = world.size();
    counters["pool_creation"] = creation.size();
    counters["pool_material"] = material.size();
    counters["openings_world"] = world_sample.size();
    counters["openings_creation"] = creation_sample.size();
    counters["openings_material"] = material_sample.size();

    std::vector<OpeningLine> openings;
    append(openings, std::move(world_sample));
    append(openings, std::move(creation_sample));
    append(openings, std::move(material_sample));
    counters["openings"] = openings.size();
    write_openings(layout_.openings(), openings);
    spdlog::info("seeds: {} openings from pools of {} / {} / {}", openings.size(), world.size(), creation.size(),
                 material.size());
    return finish(state, outputs);
}

StageOutcome Pipeline::simulate()
{
    const std::vector<std::string> outputs = {relative(layout_, layout_.simulated()),
                                              relative(layout_, layout_.simulate_rejects())};
    require_input(layout_.openings(), "seeds");
    const auto fingerprint = stage_fingerprint(config_, {"simulate"}, {layout_.openings()});
    if (auto done = completed_before(Stage::simulate, fingerprint, outputs)) {
        return *done;
    }

    const auto openings = read_openings(layout_.openings());
    {
        std::unordered_set<std::string> ids;
        for (const auto& opening : openings) {
            if (!ids.insert(opening.id).second) {
                throw InputError(fmt::format("{} lists opening {} twice", layout_.openings().string(), opening.id));
            }
        }
    }

    JobState state(Stage::simulate, fingerprint);
    std::size_t start = 0;
    if (options_.resume) {
        if (auto prior = load_state(layout_.root, Stage::simulate)) {
            require_same_fingerprint(*prior, fingerprint);
            const auto& done_ids = prior->completed();
            if (done_ids.size() > openings.size()) {
                throw InputError("checkpoint lists more completed openings than the input holds");
            }
            for (std::size_t i = 0; i < done_ids.size(); ++i) {
                if (done_ids[i] != openings[i].id) {
                    throw InputError(fmt::format("checkpoint diverges from {} at line {}",
                                                 layout_.openings().string(), i + 1));
                }
            }
            for (const auto& [name, path] : {std::pair{"dialogues", layout_.simulated()},
                                             std::pair{"rejects", layout_.simulate_rejects()}}) {
                const auto offset = prior->offsets().count(name) ? prior->offsets().at(name) : 0;
                if (file_size_or_zero(path) < offset) {
                    throw InputError(fmt::format("{} is shorter than its checkpoint ({} bytes expected)",
                                                 path.string(), offset));
                }
            }
            state = *prior;
            start = done_ids.size();
            spdlog::info("resuming simulate at opening {} of {}", start + 1, openings.size());
        }
    }

    const auto offset = [&](const char* name) -> std::uint64_t {
        const auto it = state.offsets().find(name);
        return it == state.offsets().end() ? 0 : it->second;
    };
    JsonlWriter dialogues(layout_.simulated(), offset("dialogues"));
    JsonlWriter rejects(layout_.simulate_rejects(), offset("rejects"));
    auto& counters = state.counters();
    for (const char* name : {"dialogues", "rejects", "user_calls", "assistant_calls"}) {
        counters.try_emplace(name, 0);
    }
    const auto checkpoint = [&] {
        dialogues.flush();
        rejects.flush();
        state.offsets()["dialogues"] = dialogues.bytes();
        state.offsets()["rejects"] = rejects.bytes();
        save_state(layout_.root, state);
    };
    checkpoint();

    const auto base = config_.simulation();
    const auto& catalog = PersonaCatalog::standard();
    const std::uint64_t persona_seed = derive_seed(config_.seed(), "persona");
    const auto stamp = created_at();
    auto& user = *backends().user;
    auto& assistant = *backends().assistant;
    const auto& tokenizer = default_tokenizer();
    const std::size_t cadence = std::max<std::size_t>(1, config_.count("runtime.checkpoint_every"));
    const std::size_t workers = config_.concurrency();

    std::size_t processed = start;
    for (std::size_t begin = start; begin < openings.size(); begin += cadence) {
        const std::size_t end = std::min(openings.size(), begin + cadence);
        auto results = parallel_map<SimulationOutcome>(end - begin, workers, [&](std::size_t i) {
            const auto& opening = openings[begin + i];
            auto config = base;
            config.sector = opening.sector;
            return simulate_dialogue(opening, catalog.pick(persona_seed, opening.id), config, user, assistant, stamp,
                                     tokenizer);
        });
        for (std::size_t i = 0; i < results.size(); ++i) {
            auto& result = results[i];
            if (result.rejected) {
                rejects.write_line(
                    serialize_record(RejectRecord{"simulate", result.reason, result.error, std::move(result.dialogue)}));
                ++counters["rejects"];
            } else {
                dialogues.write_line(serialize_record(result.dialogue));
                ++counters["dialogues"];
            }
            counters["user_calls"] += result.user_calls;
            counters["assistant_calls"] += result.assistant_calls;
            state.complete(openings[begin + i].id);
            ++processed;
            if (options_.halt_after && processed == *options_.halt_after) {
                if (options_.on_halt) {
                    options_.on_halt();
                }
                throw SimulatedCrash(fmt::format("halted after {} of {} openings", processed, openings.size()));
            }
        }
        checkpoint();
        spdlog::info("simulate: {}/{} openings", processed, openings.size());
    }
    counters["openings"] = openings.size();
    return finish(state, outputs);
}

StageOutcome Pipeline::filter()
{
    const std::vector<std::string> outputs = {relative(layout_, layout_.filtered()),
                                              relative(layout_, layout_.filter_rejects()),
                                              relative(layout_, layout_.filter_report())};
    require_input(layout_.simulated(), "simulate");
    const auto fingerprint = stage_fingerprint(config_, {"filter", "simulate"}, {layout_.simulated()});
    if (auto done = completed_before(Stage::filter, fingerprint, outputs)) {
        return *done;
    }

    const auto input = read_dialogues(layout_.simulated());
    const auto result =
        refine_dialogues(input, config_.quality_bounds(), PolitenessList::standard(), default_tokenizer());

    std::vector<std::string> kept;
    kept.reserve(result.kept.size());
    for (const auto& dialogue : result.kept) {
        kept.push_back(serialize_record(dialogue));
    }
    std::vector<std::string> rejected;
    rejected.reserve(result.rejects.size());
    for (const auto& reject : result.rejects) {
        rejected.push_back(serialize_record(reject));
    }
    write_lines(layout_.filtered(), kept);
    write_lines(layout_.filter_rejects(), rejected);
    write_file_atomic(layout_.filter_report(), result.report.to_json().dump(2) + "\n");

    JobState state(Stage::filter, fingerprint);
    auto& counters = state.counters();
    counters["input"] = input.size();
    counters["kept"] = result.kept.size();
    counters["rejects"] = result.rejects.size();
    for (const auto& [rule, n] : result.report.edited) {
        counters["edited: " + rule] = n;
    }
    spdlog::info("filter: kept {} of {} dialogues", result.kept.size(), input.size());
    return finish(state, outputs);
}

StageOutcome Pipeline::stats()
{
    const std::vector<std::string> outputs = {relative(layout_, layout_.stats_json()),
                                              relative(layout_, layout_.stats_text())};
    const fs::path input = config_.text("stats.input").empty() ? layout_.filtered() : fs::path(config_.text("stats.input"));
    require_input(input, config_.text("stats.input").empty() ? "filter" : "user-supplied");
    const auto fingerprint = stage_fingerprint(config_, {"stats"}, {input});
    if (auto done = completed_before(Stage::stats, fingerprint, outputs)) {
        return *done;
    }

    const auto dataset = load_dataset(input);
    ReportOptions options;
    options.tokenizer = &tokenizer_by_name(config_.text("stats.tokenizer"));
    options.mtld_threshold = config_.real("stats.mtld_threshold");
    options.min_mtld_tokens = config_.count("stats.min_mtld_tokens");
    options.topic_sample = config_.count("stats.topic_sample");
    options.coherence_sample = config_.count("stats.coherence_sample");
    options.seed = derive_seed(config_.seed(), "stats");
    options.topic_text = config_.text("stats.topic_text") == "opening" ? TopicText::opening : TopicText::full_dialogue;
    if (config_.boolean("stats.use_backend")) {
        options.embedder = backends().embedding.get();
        options.judge = backends().judge.get();
    }
    options.judge_options.max_retries = config_.count("eval.max_retries");
    options.judge_options.max_output_tokens = static_cast<int>(config_.count("eval.max_output_tokens"));
    options.judge_options.model = config_.text("backend.judge_model");
    options.concurrency = config_.concurrency();

    const auto report = dataset_report(dataset, options, input.stem().string());
    fs::create_directories(layout_.stats_json().parent_path());
    write_file_atomic(layout_.stats_json(), to_json(report).dump(2) + "\n");
    write_file_atomic(layout_.stats_text(), format_report({report}));

    JobState state(Stage::stats, fingerprint);
    state.counters()["dialogues"] = report.dialogue_count;
    state.counters()["utterances_scored"] = report.lexical.utterances;
    return finish(state, outputs);
}

StageOutcome Pipeline::record_eval(const std::string& name, StageSummary summary)
{
    auto manifest = Manifest::load_or_new(layout_.root);
    manifest.set_config(config_);
    manifest.record(name, summary);
    manifest.save(layout_.root);
    return {name, false, std::move(summary)};
}

namespace {

std::vector<eval::EvalItem> load_items(const EvalInputs& inputs)
{
    require_input(inputs.items, "user-supplied");
    auto items = eval::load_eval_set(inputs.items);
    for (const auto& [model, path] : inputs.answers) {
        require_input(path, "user-supplied");
        const auto attached = eval::attach_answers(items, model, path);
        spdlog::info("{}: answers for {} of {} items", model, attached, items.size());
    }
    return items;
}

eval::JudgeOptions judge_options(const Config& config)
{
    eval::JudgeOptions options;
    options.max_retries = config.count("eval.max_retries");
    options.max_output_tokens = static_cast<int>(config.count("eval.max_output_tokens"));
    options.model = config.text("backend.judge_model");
    return options;
}

} // namespace

StageOutcome Pipeline::eval_compare(const EvalInputs& inputs)
{
    if (inputs.models.size() != 2) {
        throw ConfigError(fmt::format("pairwise comparison needs exactly two models, got {}", inputs.models.size()));
    }
    const auto items = load_items(inputs);
    const auto verdicts = eval::compare_all(items, inputs.models[0], inputs.models[1], *backends().judge,
                                            derive_seed(config_.seed(), "judge-order"), judge_options(config_),
                                            config_.concurrency());
    const auto summary = eval::tally(verdicts);
    const auto dir = layout_.eval_dir();
    fs::create_directories(dir);
    eval::write_verdicts(dir / "compare_verdicts.jsonl", verdicts);
    write_file_atomic(dir / "compare_tally.json", eval::to_json(summary).dump(2) + "\n");
    write_file_atomic(dir / "compare_tally.txt", eval::format_tally(summary));
    return record_eval("eval-compare",
                       {config_.fingerprint({"eval"}),
                        {{"items", items.size()}, {"judged", summary.judged}, {"unjudged", summary.unjudged}},
                        {"eval/compare_verdicts.jsonl", "eval/compare_tally.json", "eval/compare_tally.txt"}});
}

StageOutcome Pipeline::eval_score(const EvalInputs& inputs)
{
    if (inputs.models.empty()) {
        throw ConfigError("independent scoring needs at least one model");
    }
    const auto items = load_items(inputs);
    const auto verdicts =
        eval::score_all(items, inputs.models, *backends().judge, judge_options(config_), config_.concurrency());
    const auto summary = eval::tally(verdicts);
    const auto dir = layout_.eval_dir();
    fs::create_directories(dir);
    eval::write_verdicts(dir / "score_verdicts.jsonl", verdicts);
    write_file_atomic(dir / "score_tally.json", eval::to_json(summary).dump(2) + "\n");
    write_file_atomic(dir / "score_tally.txt", eval::format_tally(summary));
    return record_eval("eval-score",
                       {config_.fingerprint({"eval"}),
                        {{"items", items.size()}, {"judged", summary.judged}, {"unjudged", summary.unjudged}},
                        {"eval/score_verdicts.jsonl", "eval/score_tally.json", "eval/score_tally.txt"}});
}

StageOutcome Pipeline::eval_truthfulqa(const fs::path& items_path)
{
    require_input(items_path, "user-supplied");
    const auto items = eval::load_truthful(items_path);
    eval::TruthfulOptions options;
    options.model = config_.text("backend.assistant_model");
    options.concurrency = config_.concurrency();
    const auto result = eval::truthfulqa_mc(items, *backends().assistant, options);

    nlohmann::json predictions = nlohmann::json::array();
    for (const auto& prediction : result.predictions) {
        predictions.push_back(prediction ? nlohmann::json(*prediction) : nlohmann::json());
    }
    const nlohmann::json report = {{"model", options.model},
                                   {"total", result.total},
                                   {"correct", result.correct},
                                   {"unparseable", result.unparseable},
                                   {"accuracy", result.accuracy},
                                   {"predictions", predictions}};
    fs::create_directories(layout_.eval_dir());
    write_file_atomic(layout_.eval_dir() / "truthfulqa.json", report.dump(2) + "\n");
    spdlog::info("truthfulqa: {}/{} correct ({:.4f})", result.correct, result.total, result.accuracy);
    return record_eval("eval-truthfulqa",
                       {config_.fingerprint({"eval"}),
                        {{"items", result.total}, {"correct", result.correct}, {"unparseable", result.unparseable}},
                        {"eval/truthfulqa.json"}});
}

std::string run_report(const fs::path& out_dir)
{
    const auto path = out_dir / "manifest.json";
    if (!fs::exists(path)) {
        throw InputError(fmt::format("missing input: expected {} (written by any stage)", path.string()));
    }
    const auto manifest = Manifest::load_or_new(out_dir).to_json();
    std::string out = fmt::format("run directory: {}\ntool version: {}\n\n", out_dir.string(),
                                  manifest.at("versions").at("tool").get<std::string>());
    for (const auto& [stage, entry] : manifest.at("stages").items()) {
        out += fmt::format("[{}] fingerprint {}\n", stage, entry.at("fingerprint").get<std::string>());
        for (const auto& [name, value] : entry.at("counts").items()) {
            out += fmt::format("  {:<24} {}\n", name, value.get<std::uint64_t>());
        }
    }
    const auto& conservation = manifest.at("conservation");
    if (!conservation.empty()) {
        out += "\nconservation (in = out + rejects)\n";
        for (const auto& [name, check] : conservation.items()) {
            out += fmt::format("  {:<10} {} = {} + {}  {}\n", name, check.at("in").get<std::uint64_t>(),
                               check.at("out").get<std::uint64_t>(), check.at("rejects").get<std::uint64_t>(),
                               check.at("holds").get<bool>() ? "ok" : "VIOLATED");
        }
    }
    const Layout layout{out_dir};
    if (fs::exists(layout.stats_text())) {
        out += "\n" + read_file(layout.stats_text());
    }
    return out;
}

} // namespace ultrachat::pipeline
