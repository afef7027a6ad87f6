// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit status 1 if
// any criterion fails. Runs offline against the mock backend; AC11 needs
// ULTRACHAT_SHARD pointing at a downloaded public dialogue shard.
#include "oracles/diversity_oracle.hpp"
#include "oracles/mtld_oracle.hpp"
#include "support/generators.hpp"

#include "ultrachat/core/prompts.hpp"
#include "ultrachat/core/record_io.hpp"
#include "ultrachat/core/text.hpp"
#include "ultrachat/core/tokenizer.hpp"
#include "ultrachat/core/validation.hpp"
#include "ultrachat/eval/judge.hpp"
#include "ultrachat/eval/tally.hpp"
#include "ultrachat/eval/truthfulqa.hpp"
#include "ultrachat/gateway/mock_backend.hpp"
#include "ultrachat/pipeline/stages.hpp"
#include "ultrachat/refine/politeness.hpp"
#include "ultrachat/seeds/materials.hpp"
#include "ultrachat/seeds/topics.hpp"
#include "ultrachat/seeds/writing.hpp"
#include "ultrachat/stats/diversity.hpp"
#include "ultrachat/stats/mtld.hpp"
#include "ultrachat/stats/report.hpp"

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>

using namespace ultrachat;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kMtldTolerance = 1e-9;
constexpr double kMtldSeconds = 5.0;
constexpr double kDiversitySeconds = 1.0;
constexpr double kPipelineSeconds = 60.0;
constexpr double kFirstShareLow = 0.45;
constexpr double kFirstShareHigh = 0.55;
constexpr double kTallyTolerance = 1e-12;
constexpr double kShardRounds = 3.8;
constexpr double kShardRoundsTolerance = 0.3;
constexpr double kShardDialogueTokens = 1467.4;
constexpr double kShardTokensRelative = 0.15;

struct Frozen {
    const char* text;
    double value;
};

const Frozen kFrozen[] = {
#include "oracles/mtld_frozen.inc"
};

enum class Outcome { pass, fail, skip };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

Verdict pass(std::string detail) { return {Outcome::pass, std::move(detail)}; }
Verdict fail(std::string detail) { return {Outcome::fail, std::move(detail)}; }

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag)
    {
        path_ = fs::temp_directory_path() / fmt::format("ultrachat-acceptance-{}-{}", ::getpid(), tag);
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

int run_cli(const std::string& args)
{
    const auto command = fmt::format("{} --log-level off {} >/dev/null 2>&1", ULTRACHAT_CLI, args);
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> split_words(const std::string& text)
{
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string word; in >> word;) {
        out.push_back(casefold(word));
    }
    return out;
}

Verdict mtld_oracle()
{
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto& row : kFrozen) {
        worst = std::max(worst, std::abs(mtld(split_words(row.text)) - row.value));
    }
    const bool traced = mtld({"a", "a", "a", "a"}) == 2.0 &&
                        std::abs(mtld(split_words("the cat sat on the mat")) - 10.08) < kMtldTolerance;
    testing::Engine engine(1);
    for (int i = 0; i < 1000; ++i) {
        const auto tokens = testing::tokens(engine, 1 + testing::pick(engine, 200), 1 + testing::pick(engine, 40));
        worst = std::max(worst, std::abs(mtld(tokens) - oracle::mtld(tokens)));
    }
    const double elapsed = seconds_since(start);
    const auto detail = fmt::format("{} frozen corpora + 1000 random sequences, max |d| {:.1e}, {:.2f} s",
                                    std::size(kFrozen), worst, elapsed);
    const bool ok = std::size(kFrozen) >= 20 && traced && worst < kMtldTolerance && elapsed < kMtldSeconds;
    return ok ? pass(detail) : fail(detail);
}

Verdict diversity_oracle()
{
    testing::Engine engine(2);
    std::vector<std::string> texts;
    for (int i = 0; i < 50; ++i) {
        texts.push_back(topic_text(testing::dialogue(engine), TopicText::full_dialogue));
    }
    MockBackend mock;
    const auto vectors = mock.embed(texts);
    const auto start = std::chrono::steady_clock::now();
    const double library = mean_pairwise_distance(vectors);
    const double elapsed = seconds_since(start);
    const double brute = oracle::mean_cosine_distance(vectors);
    const auto detail = fmt::format("50 records, 1225 pairs, library {:.17g} oracle {:.17g}, {:.4f} s", library,
                                    brute, elapsed);
    return library == brute && elapsed < kDiversitySeconds ? pass(detail) : fail(detail);
}

Verdict template_fidelity()
{
    std::istringstream lines(read_file(fs::path(ULTRACHAT_GOLDEN_DIR) / "concat_templates.jsonl"));
    std::map<int, int> per_template;
    std::size_t mismatches = 0;
    for (std::string line; std::getline(lines, line);) {
        const auto row = nlohmann::json::parse(line);
        const int id = row.at("template");
        if (seeds::render_concat(id, row.at("text").get<std::string>(), row.at("instruction").get<std::string>()) !=
            row.at("expected").get<std::string>()) {
            ++mismatches;
        }
        ++per_template[id];
    }
    const bool covered = per_template.size() == seeds::kConcatTemplateCount &&
                         std::all_of(per_template.begin(), per_template.end(),
                                     [](const auto& entry) { return entry.second == 3; });
    const auto detail = fmt::format("{} templates x 3 pairs, {} mismatches", per_template.size(), mismatches);
    return covered && mismatches == 0 ? pass(detail) : fail(detail);
}

bool polite_head(const Dialogue& dialogue)
{
    const auto& phrases = PolitenessList::standard().user;
    for (const auto& turn : dialogue.turns) {
        if (turn.role != Role::user) {
            continue;
        }
        for (auto sentence : split_sentences(turn.content)) {
            if (starts_with_phrase(sentence, phrases)) {
                return true;
            }
        }
    }
    return false;
}

void run_mock(const fs::path& out, std::uint64_t seed)
{
    const auto config = pipeline::Config::load(std::nullopt, {{"seed", std::to_string(seed)}},
                                               [](const std::string&) { return std::nullopt; });
    pipeline::RunOptions options;
    options.out_dir = out;
    pipeline::Pipeline run(config, options);
    run.seeds();
    run.simulate();
    run.filter();
}

Verdict end_to_end()
{
    ScratchDir first("e2e-1");
    ScratchDir second("e2e-2");
    const auto start = std::chrono::steady_clock::now();
    run_mock(first.path(), 42);
    const double elapsed = seconds_since(start);
    run_mock(second.path(), 42);

    const pipeline::Layout a{first.path()};
    const pipeline::Layout b{second.path()};
    const auto kept = read_dialogues(a.filtered());
    std::set<Sector> sectors;
    std::size_t invalid = 0;
    std::size_t polite = 0;
    for (const auto& d : kept) {
        sectors.insert(d.sector);
        invalid += validate_dialogue(d).ok() ? 0 : 1;
        polite += polite_head(d) ? 1 : 0;
    }
    const auto manifest = nlohmann::json::parse(read_file(first.path() / "manifest.json"));
    bool conserved = manifest.at("conservation").size() == 3;
    for (const auto& [name, check] : manifest.at("conservation").items()) {
        conserved = conserved && check.at("holds").get<bool>();
    }
    bool identical = true;
    for (const auto& path : {a.openings(), a.simulated(), a.simulate_rejects(), a.filtered(), a.filter_rejects(),
                             a.filter_report(), first.path() / "manifest.json"}) {
        identical = identical && read_file(path) == read_file(second.path() / fs::relative(path, first.path()));
    }
    const auto detail =
        fmt::format("{} dialogues over {} sectors, {} invalid, {} polite heads, conservation {}, rerun {}, {:.2f} s",
                    kept.size(), sectors.size(), invalid, polite, conserved ? "holds" : "broken",
                    identical ? "byte-identical" : "differs", elapsed);
    const bool ok = kept.size() >= 100 && sectors.size() == 3 && invalid == 0 && polite == 0 && conserved &&
                    identical && elapsed < kPipelineSeconds;
    return ok ? pass(detail) : fail(detail);
}

std::size_t line_count(const fs::path& path)
{
    const auto text = read_file(path);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

Verdict crash_resume()
{
    int matched = 0;
    std::string problem;
    for (int trial = 0; trial < 10; ++trial) {
        const auto seed = std::to_string(100 + trial);
        ScratchDir reference(fmt::format("ref-{}", trial));
        ScratchDir resumed(fmt::format("resume-{}", trial));
        const auto ref = fmt::format("--seed {} --out-dir {}", seed, reference.path().string());
        const auto res = fmt::format("--seed {} --out-dir {}", seed, resumed.path().string());
        if (run_cli("seeds " + ref) != 0 || run_cli("simulate " + ref) != 0 || run_cli("seeds " + res) != 0) {
            problem = "uninterrupted run failed";
            continue;
        }
        const auto half = line_count(pipeline::Layout{resumed.path()}.openings()) / 2;
        const int halted = run_cli(fmt::format("simulate --halt-after {} {}", half, res));
        const int finished = run_cli("simulate --resume " + res);
        const pipeline::Layout x{reference.path()};
        const pipeline::Layout y{resumed.path()};
        if (halted == 75 && finished == 0 && read_file(x.simulated()) == read_file(y.simulated()) &&
            read_file(x.simulate_rejects()) == read_file(y.simulate_rejects())) {
            ++matched;
        } else if (problem.empty()) {
            problem = fmt::format("trial {}: halt exit {}, resume exit {}", trial, halted, finished);
        }
    }
    auto detail = fmt::format("{}/10 trials halted at 50% then resumed byte-identical", matched);
    if (!problem.empty()) {
        detail += "; " + problem;
    }
    return matched == 10 ? pass(detail) : fail(detail);
}

std::vector<std::string> literal_segments(std::string_view pattern)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto open = pattern.find('{', start);
        if (open == std::string_view::npos) {
            out.emplace_back(pattern.substr(start));
            return out;
        }
        out.emplace_back(pattern.substr(start, open - start));
        start = pattern.find('}', open) + 1;
    }
}

/// True when `rendered` is the template with exactly `values` in its slots.
bool differs_only_in_slots(std::string_view pattern, const std::string& rendered, const std::vector<std::string>& values)
{
    const auto segments = literal_segments(pattern);
    if (segments.size() != values.size() + 1) {
        return false;
    }
    std::string rebuilt = segments.front();
    for (std::size_t i = 0; i < values.size(); ++i) {
        rebuilt += values[i] + segments[i + 1];
    }
    return rebuilt == rendered;
}

Verdict judge_prompt_fidelity()
{
    const auto pairwise = read_file(fs::path(ULTRACHAT_GOLDEN_DIR) / "judge_pairwise.txt");
    const auto independent = read_file(fs::path(ULTRACHAT_GOLDEN_DIR) / "judge_independent.txt");
    const std::vector<std::vector<std::string>> cases = {
        {"What is 2+2?", "4", "Four."},
        {"Explain {answer}.", "Line one\nLine two\n", ""},
        {"¿Qué es la fotosíntesis?", "[The End of Assistant 1's Answer]", "{question}"},
    };
    std::size_t checked = 0;
    std::size_t bad = 0;
    for (const auto& c : cases) {
        bad += differs_only_in_slots(pairwise, eval::render_pairwise(c[0], c[1], c[2]), c) ? 0 : 1;
        bad += differs_only_in_slots(independent, eval::render_independent(c[0], c[1]), {c[0], c[1]}) ? 0 : 1;
        checked += 2;
    }
    const bool templates_match = pairwise == prompts::kPairwiseTemplate && independent == prompts::kIndependentTemplate;
    const auto detail = fmt::format("{} renders byte-diffed against the vendored templates, {} differ outside slots",
                                    checked, bad);
    return bad == 0 && templates_match ? pass(detail) : fail(detail);
}

eval::EvalItem eval_item(int i, const std::string& answer_a, const std::string& answer_b)
{
    return {fmt::format("item-{:04}", i), fmt::format("Question number {}?", i), i % 2 == 0 ? "general" : "math",
            {{"model-a", answer_a}, {"model-b", answer_b}}};
}

Verdict order_randomization()
{
    std::vector<eval::EvalItem> items;
    for (int i = 0; i < 1000; ++i) {
        const bool a_good = i % 3 != 0;
        items.push_back(eval_item(i, fmt::format("{}-{}", a_good ? "GOOD" : "POOR", i),
                                  fmt::format("{}-{}", a_good ? "POOR" : "GOOD", i)));
    }
    // The judge scores by answer content, whichever slot it sits in.
    LambdaBackend judge([](const ChatRequest& request) {
        const auto& text = request.messages.back().content;
        const bool good_first = text.find("GOOD-") < text.find("POOR-");
        return std::string(good_first ? "8 3\nFirst is better." : "3 8\nSecond is better.");
    });
    const auto verdicts = eval::compare_all(items, "model-a", "model-b", judge, 42, {}, 4);

    std::size_t a_first = 0;
    std::size_t consistent = 0;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const auto& v = verdicts[i];
        a_first += v.presented_first == "model-a" ? 1 : 0;
        const bool a_good = i % 3 != 0;
        const std::vector<int> expected = a_good ? std::vector<int>{8, 3} : std::vector<int>{3, 8};
        consistent += v.judged && v.scores == expected ? 1 : 0;
    }

    // Shuffling the verdicts must not change the tally.
    auto shuffled = verdicts;
    testing::Engine engine(3);
    std::shuffle(shuffled.begin(), shuffled.end(), engine);
    const bool stable = eval::to_json(eval::tally(verdicts)) == eval::to_json(eval::tally(shuffled));

    const double share = static_cast<double>(a_first) / static_cast<double>(verdicts.size());
    const auto detail =
        fmt::format("first-position share {:.3f}, {}/1000 verdicts unmapped to the right model, shuffled tally {}",
                    share, consistent, stable ? "unchanged" : "changed");
    const bool ok = share >= kFirstShareLow && share <= kFirstShareHigh && consistent == 1000 && stable;
    return ok ? pass(detail) : fail(detail);
}

eval::JudgeVerdict pair_verdict(int i, int a, int b)
{
    eval::JudgeVerdict v;
    v.item_id = fmt::format("v{:03}", i);
    v.category = "general";
    v.mode = eval::JudgeMode::pairwise;
    v.models = {"A", "B"};
    v.scores = {a, b};
    v.presented_first = "A";
    v.judged = true;
    v.attempts = 1;
    return v;
}

std::vector<eval::JudgeVerdict> pair_set(const std::vector<std::pair<int, int>>& scores)
{
    std::vector<eval::JudgeVerdict> out;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out.push_back(pair_verdict(static_cast<int>(i), scores[i].first, scores[i].second));
    }
    return out;
}

bool near(double x, double y) { return std::abs(x - y) <= kTallyTolerance; }

Verdict tally_correctness()
{
    struct Case {
        std::vector<std::pair<int, int>> scores;
        eval::PairTally expected;
        double mean_a, std_a, mean_b, std_b;
    };
    // Hand-computed: population std; a tie is exact equality.
    const std::vector<Case> cases = {
        {{{9, 7}, {6, 6}, {5, 8}}, {1, 1, 1}, 20.0 / 3.0, std::sqrt(26.0 / 9.0), 7.0, std::sqrt(2.0 / 3.0)},
        {{{10, 1}, {10, 1}, {10, 1}, {10, 1}}, {4, 0, 0}, 10.0, 0.0, 1.0, 0.0},
        {{{5, 5}, {7, 7}}, {0, 2, 0}, 6.0, 1.0, 6.0, 1.0},
        {{{2, 9}, {4, 9}, {4, 9}, {4, 9}, {5, 9}, {5, 9}, {7, 9}, {9, 9}}, {0, 1, 7}, 5.0, 2.0, 9.0, 0.0},
        {{{1, 2}, {3, 2}}, {1, 0, 1}, 2.0, 1.0, 2.0, 0.0},
    };
    std::size_t good = 0;
    for (const auto& c : cases) {
        const auto t = eval::tally(pair_set(c.scores));
        const auto& counts = t.pairs.at({"A", "B"});
        const auto& a = t.pairwise_scores.at("A");
        const auto& b = t.pairwise_scores.at("B");
        if (counts == c.expected && near(a.mean, c.mean_a) && near(a.stddev, c.std_a) && near(b.mean, c.mean_b) &&
            near(b.stddev, c.std_b) && t.judged == c.scores.size() && t.unjudged == 0) {
            ++good;
        }
    }
    const auto flat = eval::score_stats({9, 9, 9});
    const bool flat_ok = flat.count == 3 && flat.mean == 9.0 && flat.stddev == 0.0;
    const auto detail = fmt::format("{}/{} constructed verdict sets reproduce W/T/L and mean/std", good, cases.size());
    return good == cases.size() && flat_ok ? pass(detail) : fail(detail);
}

Verdict truthfulqa_runner()
{
    std::vector<eval::TruthfulItem> items;
    std::map<std::string, bool> truth;
    std::size_t expected_correct = 0;
    for (int i = 0; i < 200; ++i) {
        eval::TruthfulItem item;
        item.question = fmt::format("Question {}?", i / 4);
        item.answer = fmt::format("<candidate {:03}>", i);
        item.label = i % 4 == 0;
        truth[item.answer] = item.label;
        items.push_back(item);
    }
    // The oracle looks up the truth and answers it, except on items whose
    // index is 1 mod 5 (wrong on purpose) or 2 mod 25 (no verdict at all).
    const auto agrees = [](int i) { return i % 5 != 1 && i % 25 != 2; };
    for (int i = 0; i < 200; ++i) {
        expected_correct += agrees(i) ? 1 : 0;
    }
    LambdaBackend model([&](const ChatRequest& request) {
        const auto& text = request.messages.back().content;
        const auto at = text.find("<candidate ");
        const int i = std::stoi(text.substr(at + 11, 3));
        const bool label = truth.at(fmt::format("<candidate {:03}>", i));
        if (i % 25 == 2) {
            return std::string("I cannot say.");
        }
        return std::string((label == agrees(i)) ? "True" : "False");
    });
    const auto result = eval::truthfulqa_mc(items, model);
    const double expected = static_cast<double>(expected_correct) / 200.0;
    const auto detail = fmt::format("accuracy {} on 200 items, constructed ground truth {}", result.accuracy, expected);
    return result.accuracy == expected && result.total == 200 ? pass(detail) : fail(detail);
}

Verdict fanout_counts()
{
    MockBackend mock;
    const auto world = seeds::world_openings(seeds::meta_topic(seeds::standard_meta_topics().front()),
                                             seeds::TopicFanout{}, mock);
    const auto writing = seeds::writing_instructions(MaterialType::poems, 10, 0.8, mock, 42);
    const auto refined = std::count_if(writing.begin(), writing.end(), [](const OpeningLine& opening) {
        return std::any_of(opening.lineage.begin(), opening.lineage.end(),
                           [](const auto& step) { return step.stage == "refined" && step.value == "true"; });
    });
    const auto pieces = seeds::classify_corpus(seeds::sample_corpus(), MaterialKeywordTable::standard());
    std::size_t five_distinct = 0;
    for (const auto& piece : pieces) {
        const auto instructions = seeds::material_instructions(piece, 5, mock);
        std::set<std::string> distinct;
        for (const auto& instruction : instructions) {
            distinct.insert(normalize_for_dedup(instruction));
        }
        five_distinct += instructions.size() == 5 && distinct.size() == 5 ? 1 : 0;
    }
    const auto detail = fmt::format("{} sector-1 questions, {}/10 refined, {}/{} pieces with 5 distinct instructions",
                                    world.size(), refined, five_distinct, pieces.size());
    const bool ok = world.size() == 4400 && refined == 8 && !pieces.empty() && five_distinct == pieces.size();
    return ok ? pass(detail) : fail(detail);
}

Verdict public_shard()
{
    const char* shard = std::getenv("ULTRACHAT_SHARD");
    if (shard == nullptr || *shard == '\0') {
        return {Outcome::skip, "set ULTRACHAT_SHARD to a downloaded public shard to run"};
    }
    const auto dataset = load_dataset(shard);
    const auto report = dataset_report(dataset, ReportOptions{}, fs::path(shard).filename().string());
    const bool rounds_ok = std::abs(report.avg_rounds - kShardRounds) <= kShardRoundsTolerance;
    const bool tokens_ok =
        std::abs(report.avg_dialogue_tokens - kShardDialogueTokens) <= kShardTokensRelative * kShardDialogueTokens;
    const auto detail = fmt::format("{} dialogues, avg rounds {:.2f}, avg dialogue tokens {:.1f}",
                                    report.dialogue_count, report.avg_rounds, report.avg_dialogue_tokens);
    return rounds_ok && tokens_ok ? pass(detail) : fail(detail);
}

} // namespace

int main()
{
    spdlog::set_level(spdlog::level::off);
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"AC1  mtld oracle equivalence", mtld_oracle},
        {"AC2  topic diversity exact oracle", diversity_oracle},
        {"AC3  concatenation template fidelity", template_fidelity},
        {"AC4  end-to-end mock pipeline", end_to_end},
        {"AC5  crash-resume determinism", crash_resume},
        {"AC6  judge prompt fidelity", judge_prompt_fidelity},
        {"AC7  order randomization", order_randomization},
        {"AC8  tally correctness", tally_correctness},
        {"AC9  truthfulqa runner", truthfulqa_runner},
        {"AC10 fan-out counts", fanout_counts},
        {"AC11 public shard statistics", public_shard},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Verdict verdict;
        try {
            verdict = check();
        } catch (const std::exception& error) {
            verdict = fail(std::string("threw: ") + error.what());
        }
        const char* label = verdict.outcome == Outcome::pass ? "PASS" : verdict.outcome == Outcome::skip ? "SKIP" : "FAIL";
        fmt::print("{} {:<40} {}\n", label, name, verdict.detail);
        failures += verdict.outcome == Outcome::fail ? 1 : 0;
    }
    std::fflush(stdout);
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
