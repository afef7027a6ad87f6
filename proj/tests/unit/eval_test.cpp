// SPDX-License-Identifier: Apache-2.0
#include "support/generators.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/eval/eval_io.hpp"
#include "ultrachat/eval/judge.hpp"
#include "ultrachat/eval/tally.hpp"
#include "ultrachat/eval/truthfulqa.hpp"
#include "ultrachat/gateway/mock_backend.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace ultrachat;
using namespace ultrachat::eval;

namespace {

EvalItem item(std::string id, std::string a = "Answer from A.", std::string b = "Answer from B.",
              std::string category = "Math")
{
    return {std::move(id), "What is 2 + 2?", std::move(category), {{"A", std::move(a)}, {"B", std::move(b)}}};
}

LambdaBackend judge_replying(std::vector<std::string> replies)
{
    auto next = std::make_shared<std::size_t>(0);
    return LambdaBackend([replies = std::move(replies), next](const ChatRequest&) {
        return replies[std::min((*next)++, replies.size() - 1)];
    });
}

JudgeVerdict pairwise_verdict(std::string id, std::string category, int a, int b)
{
    JudgeVerdict v;
    v.item_id = std::move(id);
    v.category = std::move(category);
    v.mode = JudgeMode::pairwise;
    v.models = {"A", "B"};
    v.scores = {a, b};
    v.presented_first = "A";
    v.judged = true;
    return v;
}

JudgeVerdict score_verdict(std::string id, std::string model, int score, std::string category = "Math")
{
    JudgeVerdict v;
    v.item_id = std::move(id);
    v.category = std::move(category);
    v.models = {std::move(model)};
    v.scores = {score};
    v.judged = true;
    return v;
}

std::string find_item_id(std::uint64_t seed, bool a_first)
{
    for (int i = 0;; ++i) {
        const auto id = "item-" + std::to_string(i);
        if (model_a_first(seed, id, "A", "B") == a_first) {
            return id;
        }
    }
}

} // namespace

TEST_CASE("pairwise scores map back through the presented order")
{
    const auto id = find_item_id(5, false);
    auto judge = judge_replying({"8 6\nAssistant 1 was more precise."});
    const auto verdict = pairwise_compare(item(id), "A", "B", judge, 5);
    CHECK(verdict.presented_first == "B");
    CHECK(verdict.models == std::vector<std::string>{"A", "B"});
    CHECK(verdict.scores == std::vector<int>{6, 8});
    CHECK(verdict.judged);
    CHECK(verdict.mode == JudgeMode::pairwise);
    CHECK(verdict.rationale.find("more precise") != std::string::npos);

    const auto other = find_item_id(5, true);
    auto again = judge_replying({"8 6"});
    CHECK(pairwise_compare(item(other), "A", "B", again, 5).scores == std::vector<int>{8, 6});
}

TEST_CASE("the presented answer order follows the seeded coin")
{
    std::string first_answer;
    LambdaBackend judge([&](const ChatRequest& request) {
        const auto& text = request.messages.back().content;
        first_answer = text.find("Answer from A.") < text.find("Answer from B.") ? "A" : "B";
        return std::string("7 7");
    });
    for (int i = 0; i < 50; ++i) {
        const auto verdict = pairwise_compare(item("q" + std::to_string(i)), "A", "B", judge, 11);
        CHECK(verdict.presented_first == first_answer);
    }
}

TEST_CASE("model A is shown first about half the time")
{
    int first = 0;
    for (int i = 0; i < 1000; ++i) {
        first += model_a_first(42, "item-" + std::to_string(i), "A", "B") ? 1 : 0;
    }
    CHECK(first >= 450);
    CHECK(first <= 550);
}

TEST_CASE("identical answers under the mock judge tie")
{
    MockBackend judge;
    for (int i = 0; i < 30; ++i) {
        const auto verdict =
            pairwise_compare(item("same-" + std::to_string(i), "Four.", "Four."), "A", "B", judge, 3);
        REQUIRE(verdict.judged);
        CHECK(verdict.scores[0] == verdict.scores[1]);
    }
}

TEST_CASE("unmapping is consistent under swapped order and slots")
{
    testing::Engine engine(3);
    for (int i = 0; i < 1000; ++i) {
        const int x = 1 + static_cast<int>(testing::pick(engine, 10));
        const int y = 1 + static_cast<int>(testing::pick(engine, 10));
        CHECK(unmap_scores(true, {x, y}) == unmap_scores(false, {y, x}));
        CHECK(unmap_scores(true, {x, y}) == std::pair<int, int>{x, y});
    }
}

TEST_CASE("pairwise reply parsing")
{
    CHECK(parse_pairwise("8 6\nbecause") == std::optional<std::pair<int, int>>({8, 6}));
    CHECK(parse_pairwise("  10   1 ") == std::optional<std::pair<int, int>>({10, 1}));
    CHECK_FALSE(parse_pairwise("Assistant 1: 8, Assistant 2: 6").has_value());
    CHECK_FALSE(parse_pairwise("11 6").has_value());
    CHECK_FALSE(parse_pairwise("8").has_value());
    CHECK_FALSE(parse_pairwise("\n8 6").has_value());
}

TEST_CASE("score parsing")
{
    CHECK(parse_score("Score: 9") == std::optional<int>(9));
    CHECK(parse_score("I'd say Score: 10 overall") == std::optional<int>(10));
    CHECK_FALSE(parse_score("ten").has_value());
    CHECK_FALSE(parse_score("Score: 11").has_value());
    CHECK_FALSE(parse_score("Score: 0").has_value());
    CHECK_FALSE(parse_score("Score: 7.5").has_value());
}

TEST_CASE("unparseable judges leave the item unjudged after two retries")
{
    auto judge = judge_replying({"ten"});
    const auto verdict = independent_score(item("x"), "A", judge);
    CHECK_FALSE(verdict.judged);
    CHECK(verdict.scores.empty());
    CHECK(verdict.attempts == 3);
    CHECK(judge.complete_calls() == 3);

    auto pair_judge = judge_replying({"I prefer the first.", "still prose", "8 5"});
    const auto recovered = pairwise_compare(item("y"), "A", "B", pair_judge, 1);
    CHECK(recovered.judged);
    CHECK(recovered.attempts == 3);
}

TEST_CASE("retries append the format reminder")
{
    std::vector<std::string> asked;
    LambdaBackend judge([&](const ChatRequest& request) {
        asked.push_back(request.messages.back().content);
        return std::string(asked.size() < 2 ? "nope" : "Score: 4");
    });
    const auto verdict = independent_score(item("x"), "A", judge);
    CHECK(verdict.scores == std::vector<int>{4});
    REQUIRE(asked.size() == 2);
    CHECK(asked[0].find(prompts::kScoreFormatReminder) == std::string::npos);
    CHECK(asked[1].find(prompts::kScoreFormatReminder) != std::string::npos);
}

TEST_CASE("missing answers are preconditions")
{
    MockBackend judge;
    auto lonely = item("x");
    lonely.answers.erase("B");
    CHECK_THROWS_AS(pairwise_compare(lonely, "A", "B", judge, 1), PreconditionError);
    CHECK_THROWS_AS(independent_score(lonely, "B", judge), PreconditionError);
    CHECK(judge.complete_calls() == 0);
}

TEST_CASE("judge request splits at the first blank line")
{
    const auto request = judge_request(render_independent("Q?", "A."), JudgeOptions{});
    REQUIRE(request.messages.size() == 2);
    CHECK(request.messages[0].role == MessageRole::system);
    CHECK(request.messages[0].content == prompts::kJudgeSystemLine);
    CHECK(request.messages[1].content.find("Q?") != std::string::npos);
    CHECK(request.temperature == 0.0);
}

TEST_CASE("tally counts wins ties and losses")
{
    const auto t = tally({pairwise_verdict("1", "Math", 9, 7), pairwise_verdict("2", "Math", 6, 6),
                          pairwise_verdict("3", "Writing", 5, 8)});
    const auto& ab = t.pairs.at({"A", "B"});
    CHECK(ab == PairTally{1, 1, 1});
    CHECK(t.pairs_by_category.at("Math").at({"A", "B"}) == PairTally{1, 1, 0});
    CHECK(t.pairs_by_category.at("Writing").at({"A", "B"}) == PairTally{0, 0, 1});
    CHECK(t.judged == 3);
    CHECK(t.pairwise_scores.at("A").mean == doctest::Approx(20.0 / 3.0));
}

TEST_CASE("independent scores report mean and population deviation")
{
    const auto same = tally({score_verdict("1", "A", 9), score_verdict("2", "A", 9), score_verdict("3", "A", 9)});
    CHECK(same.scores.at("A").mean == 9.0);
    CHECK(same.scores.at("A").stddev == 0.0);

    const auto spread = score_stats({2, 4, 4, 4, 5, 5, 7, 9});
    CHECK(spread.mean == doctest::Approx(5.0));
    CHECK(spread.stddev == doctest::Approx(2.0));
}

TEST_CASE("an empty tally is all zeros")
{
    const auto t = tally({});
    CHECK(t.pairs.empty());
    CHECK(t.scores.empty());
    CHECK(t.judged == 0);
    CHECK(score_stats({}).count == 0);
    CHECK(score_stats({}).mean == 0.0);
    CHECK_FALSE(format_tally(t).empty());
}

TEST_CASE("tally conservation over random verdicts")
{
    testing::Engine engine(6);
    for (int round = 0; round < 50; ++round) {
        std::vector<JudgeVerdict> verdicts;
        const std::size_t n = testing::pick(engine, 40);
        std::size_t judged = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto v = pairwise_verdict("i" + std::to_string(i), i % 2 ? "Math" : "Writing",
                                      1 + static_cast<int>(testing::pick(engine, 10)),
                                      1 + static_cast<int>(testing::pick(engine, 10)));
            if (testing::pick(engine, 5) == 0) {
                v.judged = false;
                v.scores.clear();
            } else {
                ++judged;
            }
            verdicts.push_back(v);
        }
        const auto t = tally(verdicts);
        const auto compared = t.pairs.count({"A", "B"}) ? t.pairs.at({"A", "B"}).compared() : 0;
        CHECK(compared == judged);
        CHECK(t.judged + t.unjudged == n);
        std::reverse(verdicts.begin(), verdicts.end());
        CHECK(to_json(tally(verdicts)) == to_json(t));
    }
}

TEST_CASE("truthfulqa accuracy")
{
    std::vector<TruthfulItem> items;
    for (int i = 0; i < 10; ++i) {
        items.push_back({"Is claim " + std::to_string(i) + " right?", "Answer " + std::to_string(i), i % 2 == 0});
    }
    LambdaBackend oracle([&](const ChatRequest& request) {
        for (const auto& it : items) {
            if (request.messages.back().content.find(it.answer) != std::string::npos) {
                return std::string(it.label ? "True." : "False.");
            }
        }
        return std::string("unknown");
    });
    CHECK(truthfulqa_mc(items, oracle).accuracy == 1.0);

    LambdaBackend yes([](const ChatRequest&) { return std::string("true"); });
    const auto half = truthfulqa_mc(items, yes);
    CHECK(half.accuracy == 0.5);
    CHECK(half.correct == 5);

    LambdaBackend mumble([](const ChatRequest&) { return std::string("Hard to say."); });
    const auto lost = truthfulqa_mc(items, mumble);
    CHECK(lost.accuracy == 0.0);
    CHECK(lost.unparseable == 10);

    CHECK_THROWS_AS(truthfulqa_mc({}, yes), PreconditionError);
}

TEST_CASE("true/false parsing takes the first standalone word")
{
    CHECK(parse_true_false("TRUE") == std::optional<bool>(true));
    CHECK(parse_true_false("It is false, not true.") == std::optional<bool>(false));
    CHECK_FALSE(parse_true_false("untrue claims").has_value());
    CHECK_FALSE(parse_true_false("").has_value());
}

TEST_CASE("truthfulqa inputs parse in both layouts")
{
    const auto lines = parse_truthful_jsonl(R"({"question": "Q", "answer": "A", "label": true})"
                                            "\n"
                                            R"({"question": "Q", "answer": "B", "label": "false"})"
                                            "\n");
    CHECK(lines == std::vector<TruthfulItem>{{"Q", "A", true}, {"Q", "B", false}});
    const auto mc = parse_truthful_mc_task(R"([{"question": "Q", "mc1_targets": {"A": 1, "B": 0, "C": 0}}])");
    CHECK(mc.size() == 3);
    CHECK(std::count_if(mc.begin(), mc.end(), [](const TruthfulItem& i) { return i.label; }) == 1);
}

TEST_CASE("verdicts round-trip through JSONL")
{
    const auto dir = std::filesystem::temp_directory_path() / "ultrachat-eval-test";
    std::filesystem::create_directories(dir);
    std::vector<JudgeVerdict> verdicts = {pairwise_verdict("1", "Math", 9, 7), score_verdict("2", "A", 4)};
    verdicts[1].rationale = "Score: 4\nshort answer";
    write_verdicts(dir / "v.jsonl", verdicts);
    CHECK(read_verdicts(dir / "v.jsonl") == verdicts);
}

TEST_CASE("evaluation sets and answers load")
{
    const auto dir = std::filesystem::temp_directory_path() / "ultrachat-eval-test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "items.jsonl") << R"({"id": "1", "category": "Math", "question": "2+2?"})" << "\n"
                                       << R"({"id": "2", "category": "Writing", "question": "A haiku?"})" << "\n";
    std::ofstream(dir / "a.jsonl") << R"({"id": "1", "answer": "4"})" << "\n"
                                   << R"({"id": "9", "answer": "stray"})" << "\n";
    auto items = load_eval_set(dir / "items.jsonl");
    REQUIRE(items.size() == 2);
    CHECK(attach_answers(items, "A", dir / "a.jsonl") == 1);
    CHECK(items[0].answers.at("A") == "4");

    std::ofstream(dir / "dup.jsonl") << R"({"id": "1", "category": "Math", "question": "x"})" << "\n"
                                     << R"({"id": "1", "category": "Math", "question": "y"})" << "\n";
    CHECK_THROWS_AS(load_eval_set(dir / "dup.jsonl"), InputError);
}

TEST_CASE("compare_all keeps input order and skips incomplete items")
{
    MockBackend judge;
    std::vector<EvalItem> items = {item("1"), item("2"), item("3")};
    items[1].answers.erase("B");
    const auto verdicts = compare_all(items, "A", "B", judge, 4, JudgeOptions{}, 3);
    REQUIRE(verdicts.size() == 2);
    CHECK(verdicts[0].item_id == "1");
    CHECK(verdicts[1].item_id == "3");
    const auto scores = score_all(items, {"A", "B"}, judge, JudgeOptions{}, 2);
    CHECK(scores.size() == 5);
}
