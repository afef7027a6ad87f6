// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/record_io.hpp"
#include "ultrachat/core/validation.hpp"
#include "ultrachat/pipeline/config.hpp"
#include "ultrachat/pipeline/job_state.hpp"
#include "ultrachat/pipeline/manifest.hpp"
#include "ultrachat/pipeline/stages.hpp"

#include <doctest.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <unistd.h>

using namespace ultrachat;
using namespace ultrachat::pipeline;
namespace fs = std::filesystem;

namespace {

class ScratchDir {
public:
    ScratchDir()
    {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("ultrachat-pipeline-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~ScratchDir() { fs::remove_all(path_); }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

EnvLookup no_env()
{
    return [](const std::string&) -> std::optional<std::string> { return std::nullopt; };
}

/// A small run: 30 openings, ten per sector.
Config small(std::map<std::string, std::string> overrides = {})
{
    overrides.try_emplace("seeds.subtopics_per_topic", "30");
    overrides.try_emplace("seeds.questions_per_subtopic", "2");
    overrides.try_emplace("seeds.expansions_per_question", "1");
    overrides.try_emplace("seeds.world_sample", "10");
    overrides.try_emplace("seeds.creation_sample", "10");
    overrides.try_emplace("seeds.material_sample", "10");
    overrides.try_emplace("runtime.checkpoint_every", "4");
    overrides.try_emplace("runtime.log_level", "off");
    spdlog::set_level(spdlog::level::off);
    return Config::load(std::nullopt, overrides, no_env());
}

RunOptions run_options(const fs::path& out, bool resume = false)
{
    RunOptions options;
    options.out_dir = out;
    options.resume = resume;
    return options;
}

void run_all(const Config& config, const fs::path& out)
{
    Pipeline pipeline(config, run_options(out));
    pipeline.seeds();
    pipeline.simulate();
    pipeline.filter();
}

int run_cli(const std::string& args)
{
    const std::string command = std::string(ULTRACHAT_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("defaults are the documented ones")
{
    const Config config;
    CHECK(config.seed() == 42);
    CHECK(config.integer("simulate.max_rounds") == 8);
    CHECK(config.text("backend.kind") == "mock");
    CHECK(config.real("stats.mtld_threshold") == doctest::Approx(0.72));
    CHECK(config.source("seed") == "default");
    CHECK(config_schema().size() == config.to_json().size());
}

TEST_CASE("later config layers win")
{
    ScratchDir dir;
    const auto file = dir.path() / "config.json";
    std::ofstream(file) << R"({"simulate": {"max_rounds": 6}, "seed": 9})";
    const EnvLookup env = [](const std::string& name) -> std::optional<std::string> {
        if (name == "ULTRACHAT_SIMULATE_MAX_ROUNDS") {
            return "5";
        }
        return std::nullopt;
    };

    const auto from_file = Config::load(file, {}, no_env());
    CHECK(from_file.integer("simulate.max_rounds") == 6);
    CHECK(from_file.source("simulate.max_rounds") == "file");
    CHECK(from_file.seed() == 9);

    const auto from_env = Config::load(file, {}, env);
    CHECK(from_env.integer("simulate.max_rounds") == 5);
    CHECK(from_env.source("simulate.max_rounds") == "env");

    const auto from_cli = Config::load(file, {{"simulate.max_rounds", "4"}}, env);
    CHECK(from_cli.integer("simulate.max_rounds") == 4);
    CHECK(from_cli.source("simulate.max_rounds") == "cli");
    CHECK(from_cli.seed() == 9);

    CHECK(env_name("simulate.max_rounds") == "ULTRACHAT_SIMULATE_MAX_ROUNDS");
}

TEST_CASE("flat dotted keys load like nested ones")
{
    ScratchDir dir;
    const auto file = dir.path() / "flat.json";
    std::ofstream(file) << R"({"simulate.max_rounds": 3})";
    CHECK(Config::load(file, {}, no_env()).integer("simulate.max_rounds") == 3);
}

TEST_CASE("unknown and ill-typed keys are rejected")
{
    try {
        Config::load(std::nullopt, {{"simulate.max_round", "3"}}, no_env());
        FAIL("expected a ConfigError");
    } catch (const ConfigError& error) {
        CHECK(std::string(error.what()).find("simulate.max_rounds") != std::string::npos);
    }
    CHECK(suggest_key("seeds.entites") == std::optional<std::string>("seeds.entities"));
    CHECK_FALSE(suggest_key("completely.unrelated.name").has_value());
    CHECK_THROWS_AS(Config::load(std::nullopt, {{"simulate.max_rounds", "many"}}, no_env()), ConfigError);
    CHECK_THROWS_AS(Config::load(std::nullopt, {{"backend.kind", "carrier-pigeon"}}, no_env()), ConfigError);
    CHECK_THROWS_AS(stage_from_string("bake"), ConfigError);
}

TEST_CASE("fingerprints ignore keys that cannot change output")
{
    const auto base = small();
    const auto faster = small({{"runtime.concurrency", "1"}});
    const auto other_seed = small({{"seed", "43"}});
    CHECK(base.fingerprint({"simulate"}) == faster.fingerprint({"simulate"}));
    CHECK(base.fingerprint({"simulate"}) != other_seed.fingerprint({"simulate"}));
    CHECK(base.fingerprint({"simulate"}) != small({{"simulate.max_rounds", "3"}}).fingerprint({"simulate"}));
}

TEST_CASE("job state round-trips and refuses duplicates")
{
    JobState state(Stage::simulate, "fp");
    state.complete("a");
    state.complete("b");
    state.counters()["dialogues"] = 2;
    state.offsets()["dialogues"] = 100;
    CHECK_THROWS_AS(state.complete("a"), PreconditionError);
    const auto back = JobState::from_json(state.to_json());
    CHECK(back.completed() == state.completed());
    CHECK(back.job_id() == state.job_id());
    CHECK(back.offsets().at("dialogues") == 100);
    CHECK_THROWS_AS(require_same_fingerprint(back, "other"), ConfigError);
}

TEST_CASE("a mock run conserves records and validates")
{
    ScratchDir dir;
    run_all(small(), dir.path());
    const Layout layout{dir.path()};

    const auto kept = read_dialogues(layout.filtered());
    CHECK(kept.size() > 20);
    std::set<Sector> sectors;
    for (const auto& d : kept) {
        CHECK(validate_dialogue(d).ok());
        sectors.insert(d.sector);
    }
    CHECK(sectors.size() == 3);

    const auto manifest = nlohmann::json::parse(read_file(dir.path() / "manifest.json"));
    for (const auto& [name, check] : manifest.at("conservation").items()) {
        CAPTURE(name);
        CHECK(check.at("holds").get<bool>());
    }
    CHECK(manifest.at("conservation").contains("pipeline"));
}

TEST_CASE("the same seed gives the same bytes")
{
    ScratchDir one;
    ScratchDir two;
    run_all(small(), one.path());
    run_all(small({{"runtime.concurrency", "1"}}), two.path());
    const Layout a{one.path()};
    const Layout b{two.path()};
    CHECK(read_file(a.openings()) == read_file(b.openings()));
    CHECK(read_file(a.simulated()) == read_file(b.simulated()));
    CHECK(read_file(a.filtered()) == read_file(b.filtered()));

    ScratchDir three;
    run_all(small({{"seed", "7"}}), three.path());
    CHECK(read_file(a.openings()) != read_file(Layout{three.path()}.openings()));
}

TEST_CASE("a halted simulate stage resumes to identical output")
{
    ScratchDir reference;
    run_all(small(), reference.path());

    for (const std::size_t halt : {1u, 6u, 15u, 29u}) {
        CAPTURE(halt);
        ScratchDir dir;
        Pipeline(small(), run_options(dir.path())).seeds();
        auto crashing = run_options(dir.path());
        crashing.halt_after = halt;
        CHECK_THROWS_AS(Pipeline(small(), crashing).simulate(), SimulatedCrash);

        const auto resuming = run_options(dir.path(), true);
        Pipeline resumed(small(), resuming);
        CHECK_FALSE(resumed.simulate().skipped);
        CHECK(read_file(Layout{dir.path()}.simulated()) == read_file(Layout{reference.path()}.simulated()));
        CHECK(read_file(Layout{dir.path()}.simulate_rejects()) ==
              read_file(Layout{reference.path()}.simulate_rejects()));
    }
}

TEST_CASE("a finished stage is skipped and a changed config is refused on resume")
{
    ScratchDir dir;
    run_all(small(), dir.path());
    const auto before = read_file(Layout{dir.path()}.simulated());

    const auto again = run_options(dir.path(), true);
    Pipeline rerun(small(), again);
    CHECK(rerun.seeds().skipped);
    CHECK(rerun.simulate().skipped);
    CHECK(rerun.filter().skipped);
    CHECK(read_file(Layout{dir.path()}.simulated()) == before);

    Pipeline changed(small({{"simulate.max_rounds", "3"}}), again);
    CHECK(changed.seeds().skipped);
    CHECK_THROWS_AS(changed.simulate(), ConfigError);

    // Without --resume the stage starts over under the new configuration.
    Pipeline restart(small({{"simulate.max_rounds", "3"}}), run_options(dir.path()));
    CHECK_FALSE(restart.simulate().skipped);
    for (const auto& d : read_dialogues(Layout{dir.path()}.simulated())) {
        CHECK(d.rounds() <= 3);
    }
}

TEST_CASE("stages need their inputs")
{
    ScratchDir dir;
    Pipeline pipeline(small(), run_options(dir.path()));
    CHECK_THROWS_AS(pipeline.simulate(), InputError);
    CHECK_THROWS_AS(pipeline.filter(), InputError);
    CHECK_THROWS_AS(run_report(dir.path()), InputError);
}

TEST_CASE("the command line maps failures to exit codes")
{
    ScratchDir dir;
    const auto out = " --out-dir " + dir.path().string() + " --log-level off";
    CHECK(run_cli("config" + out) == 0);
    CHECK(run_cli("config --set simulate.max_round=3" + out) == 2);
    CHECK(run_cli("config --set simulate.max_rounds=lots" + out) == 2);
    CHECK(run_cli("simulate" + out) == 3);
    CHECK(run_cli("eval-truthfulqa --items " + (dir.path() / "missing.jsonl").string() + out) == 3);
    CHECK(run_cli("seeds --set seeds.subtopics_per_topic=30" + out) == 0);
    CHECK(run_cli("simulate --halt-after 3 --set seeds.subtopics_per_topic=30" + out) == 75);
    CHECK(run_cli("simulate --resume --set seeds.subtopics_per_topic=30" + out) == 0);
    CHECK(run_cli("report" + out) == 0);
}
