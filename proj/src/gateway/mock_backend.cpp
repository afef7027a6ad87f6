// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/gateway/mock_backend.hpp"

#include "ultrachat/core/hash.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/core/rng.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace ultrachat {

namespace {

using Words = std::vector<std::string_view>;

const Words kAdjectives = {
    "practical", "surprising", "overlooked", "essential", "subtle", "common", "modern", "traditional",
    "reliable", "flexible", "important", "gradual", "careful", "creative", "local", "global",
    "simple", "detailed", "balanced", "long-term", "short-term", "hidden", "visible", "shared",
    "personal", "technical", "cultural", "economic", "historical", "emotional", "ethical", "measurable",
};

const Words kNouns = {
    "approach", "habit", "framework", "trade-off", "pattern", "routine", "budget", "tool",
    "method", "principle", "signal", "context", "example", "benefit", "risk", "constraint",
    "resource", "strategy", "perspective", "outcome", "decision", "factor", "detail", "question",
    "community", "schedule", "experiment", "goal", "process", "standard", "skill", "choice",
};

const Words kVerbs = {
    "shapes", "influences", "supports", "complicates", "clarifies", "changes", "strengthens", "limits",
    "improves", "reveals", "affects", "balances", "simplifies", "reinforces", "challenges", "guides",
};

const Words kPeople = {
    "beginners", "students", "families", "researchers", "small teams", "teachers", "travelers", "engineers",
    "retirees", "designers", "nurses", "volunteers", "managers", "artists", "farmers", "writers",
};

const Words kConnectives = {
    "In practice,", "For example,", "On the other hand,", "More broadly,", "In many cases,",
    "At the same time,", "Historically,", "In short,", "As a rule of thumb,", "Interestingly,",
};

// Seed-list material.
const Words kAspects = {
    "history", "ethics", "careers", "tools", "trends", "myths", "costs", "safety", "education", "future",
    "culture", "research", "policy", "daily habits", "beginner guides", "communities", "economics",
    "innovation", "challenges", "best practices",
};
const Words kQualifiers = {"", "modern ", "local ", "global ", "practical "};

const Words kQuestionForms = {
    "What are the most important things to know about {s}{f}?",
    "How has {s} changed{f} over the last decade?",
    "Why do people disagree about {s}{f}?",
    "Can you explain {s}{f} to a beginner?",
    "What are common mistakes people make with {s}{f}?",
    "How can I get started with {s}{f}?",
    "What role does {s} play{f} in everyday life?",
    "Which resources would you recommend for learning about {s}{f}?",
    "What are the pros and cons of {s}{f}?",
    "How might {s} evolve{f} in the future?",
    "Explain the key ideas behind {s}{f}.",
    "Describe a real-world example of {s}{f}.",
};
const Words kQuestionFocus = {
    "", " in practice", " for students", " in small communities", " today", " from a historical perspective",
};

const Words kExpansionLeads = {
    "Going one step further,", "In more detail,", "From a practical angle,", "For someone new to this,",
    "Looking at the long term,", "Considering the costs involved,", "From an ethical point of view,",
    "Thinking about everyday situations,", "Compared with a decade ago,", "For a small organization,",
    "In a different country,", "With limited time,",
};

const Words kEntityMetaForms = {
    "What is the history of {e}?", "Why is {e} considered significant?", "How has {e} influenced culture?",
    "What are common misconceptions about {e}?", "How do experts study {e}?", "What makes {e} unique?",
    "How has public opinion of {e} changed over time?", "What controversies surround {e}?",
};
const Words kEntityMetaTails = {"", " today", " in popular media", " among scholars"};

const Words kSpecificLeads = {
    "Specifically,", "To be more precise,", "Focusing on the details,", "Narrowing it down,",
    "In concrete terms,", "Looking at one example,", "With evidence in mind,", "Step by step,",
    "According to recent sources,", "In simple words,", "From a scholar's view,", "For a school report,",
};

const Words kExtendedObjects = {
    "a similar landmark", "a rival work", "a modern counterpart", "an earlier example", "a lesser-known case",
    "a famous imitation", "a related movement", "a neighboring tradition", "a digital reproduction",
    "a museum exhibit", "a film adaptation", "a popular parody", "a scientific analysis", "a school curriculum",
    "a tourist guide", "a comparable figure", "a later revival", "a foreign interpretation", "a children's book",
    "an academic debate",
};
const Words kExtendedForms = {
    "{m}, and how does that compare with {o}?",
    "{m}, and what would change if we looked at {o} instead?",
    "{m}, and is the same true for {o}?",
};

const Words kWritingSubjects = {
    "a rainy market day", "learning to cook", "a first job interview", "city gardening", "an old lighthouse",
    "remote teamwork", "a lost library book", "saving for a trip", "a neighborhood festival", "electric bicycles",
    "a chess tournament", "moving to a new country", "a solar-powered school", "a family recipe",
    "a mountain rescue", "starting a podcast", "a broken laptop", "a volunteer clinic", "winter sleep habits",
    "a community orchestra",
};
const Words kTones = {"warm", "formal", "playful", "persuasive", "reflective", "concise", "vivid", "humorous"};

const Words kMaterialForms = {
    "Summarize the text in {k} sentences{f}.",
    "Rewrite the passage for a younger audience{f}.",
    "Translate the main idea of the text into French{f}.",
    "List the key facts mentioned in the text{f}.",
    "Continue the text with one more paragraph{f}.",
    "Explain what the author means by the first sentence{f}.",
    "Write three discussion questions about the passage{f}.",
    "Turn the text into a short news headline and lead{f}.",
    "Identify the intended audience of the text{f}.",
    "Paraphrase the passage in plain language{f}.",
    "Point out any claims in the text that need evidence{f}.",
    "Write a reply to the author of the text{f}.",
};
const Words kMaterialFocus = {
    "", ", focusing on {w}", ", keeping a neutral tone", ", in bullet points", ", using simple words",
    ", mentioning {w}",
};

const Words kFollowUps = {
    "Could you tell me more about {w}?",
    "How does {w} relate to {w2}?",
    "What would be a practical example of {w}?",
    "Why is {w} so important here?",
    "I'm not sure I follow the part about {w}. Can you explain it differently?",
    "Can you give me a shorter version focused on {w}?",
    "What should I watch out for with {w}?",
    "Is there any evidence behind what you said about {w}?",
    "How would this work for someone with little time?",
    "What do most people get wrong about {w}?",
    "Could you compare {w} and {w2} for me?",
    "What is the first step I should take with {w}?",
};
const Words kRevisionRequests = {
    "Could you make it a bit more {a}?",
    "Can you shorten it and keep the part about {w}?",
    "Please add a line about {w}.",
    "Could you change the ending so it feels more {a}?",
    "Can you rewrite the opening to mention {w2}?",
};
const Words kPoliteLeads = {"Thanks! ", "Thank you, that helps. ", "Thanks a lot. "};
const Words kClosingThanks = {"Thank you so much!", "Thanks, that was really helpful.", "Thank you."};

const Words kSentenceForms = {
    "{C} {w} {v} the {a} {n} that {p} rely on.",
    "A {a} {n} is to treat {w} as part of a wider {n2}.",
    "{C} {p} often find that {w} {v} their {n}.",
    "The {a} side of {w} is easy to miss, but it {v} every {n}.",
    "It helps to compare {w} with {w2}, because each {v} the {n} differently.",
    "{C} a {a} {n} around {w} tends to last longer than a quick fix.",
    "Many {p} start with {w} and only later notice the {a} {n2}.",
    "Keep the {n} {a} and revisit {w} once the {n2} is clear.",
    "{C} the link between {w} and {w2} {v} how {p} plan ahead.",
    "A good {n} for {w} is to set one {a} goal and measure it.",
};

std::string_view pick(const Words& words, Rng& rng)
{
    return words[rng.below(words.size())];
}

std::string capitalize(std::string text)
{
    if (!text.empty() && text[0] >= 'a' && text[0] <= 'z') {
        text[0] = static_cast<char>(text[0] - 'a' + 'A');
    }
    return text;
}

std::string decapitalize(std::string text)
{
    if (text.size() > 1 && text[0] >= 'A' && text[0] <= 'Z' && !(text[1] >= 'A' && text[1] <= 'Z')) {
        text[0] = static_cast<char>(text[0] - 'A' + 'a');
    }
    return text;
}

std::string strip_terminal(std::string_view text)
{
    text = trim(text);
    while (!text.empty() && (text.back() == '?' || text.back() == '.' || text.back() == '!')) {
        text.remove_suffix(1);
    }
    return std::string(text);
}

/// Distinct content words, in order of first appearance.
std::vector<std::string> topic_words(std::string_view text)
{
    std::vector<std::string> out;
    for (auto& word : content_words(text)) {
        if (std::find(out.begin(), out.end(), word) == out.end()) {
            out.push_back(std::move(word));
        }
    }
    return out;
}

std::string word_or(const std::vector<std::string>& words, Rng& rng, std::string_view fallback)
{
    if (words.empty()) {
        return std::string(fallback);
    }
    return words[rng.below(words.size())];
}

std::string sentence(Rng& rng, const std::vector<std::string>& topics)
{
    const auto w = word_or(topics, rng, pick(kNouns, rng));
    const auto w2 = word_or(topics, rng, pick(kNouns, rng));
    auto text = prompts::render(pick(kSentenceForms, rng),
                                {{"C", pick(kConnectives, rng)},
                                 {"w", w},
                                 {"w2", w2},
                                 {"a", pick(kAdjectives, rng)},
                                 {"n", pick(kNouns, rng)},
                                 {"n2", pick(kNouns, rng)},
                                 {"v", pick(kVerbs, rng)},
                                 {"p", pick(kPeople, rng)}});
    return capitalize(std::move(text));
}

/// Picks `count` distinct combinations from a grid of `size` cells, starting at a seeded offset.
std::vector<std::size_t> distinct_cells(std::size_t count, std::size_t size, Rng& rng)
{
    std::vector<std::size_t> cells;
    const auto start = rng.below(size);
    for (std::size_t i = 0; i < count; ++i) {
        cells.push_back((start + i) % size);
    }
    return cells;
}

std::string seed_list(const prompts::SeedTaskRequest& task, Rng& rng)
{
    std::vector<std::string> items;
    const auto subject = std::string(trim(task.subject));
    switch (task.task) {
    case prompts::SeedTask::subtopics:
        for (auto cell : distinct_cells(task.count, kAspects.size() * kQualifiers.size(), rng)) {
            items.push_back(capitalize(fmt::format("{}{} of {}", kQualifiers[cell % kQualifiers.size()],
                                                   kAspects[cell / kQualifiers.size()], subject)));
        }
        break;
    case prompts::SeedTask::questions:
        for (auto cell : distinct_cells(task.count, kQuestionForms.size() * kQuestionFocus.size(), rng)) {
            items.push_back(prompts::render(kQuestionForms[cell / kQuestionFocus.size()],
                                            {{"s", decapitalize(subject)}, {"f", kQuestionFocus[cell % kQuestionFocus.size()]}}));
        }
        break;
    case prompts::SeedTask::expanded_questions:
    case prompts::SeedTask::entity_specific: {
        const auto core = decapitalize(strip_terminal(task.task == prompts::SeedTask::entity_specific ? task.context : subject));
        for (auto cell : distinct_cells(task.count, kExpansionLeads.size() * kSpecificLeads.size(), rng)) {
            const auto& leads = task.task == prompts::SeedTask::entity_specific ? kSpecificLeads : kExpansionLeads;
            const auto& others = task.task == prompts::SeedTask::entity_specific ? kExpansionLeads : kSpecificLeads;
            items.push_back(fmt::format("{} {} {}?", leads[cell % leads.size()], decapitalize(std::string(others[cell / leads.size()])), core));
        }
        break;
    }
    case prompts::SeedTask::entity_meta:
        for (auto cell : distinct_cells(task.count, kEntityMetaForms.size() * kEntityMetaTails.size(), rng)) {
            auto form = strip_terminal(kEntityMetaForms[cell / kEntityMetaTails.size()]);
            items.push_back(prompts::render(form, {{"e", subject}}) + std::string(kEntityMetaTails[cell % kEntityMetaTails.size()]) + "?");
        }
        break;
    case prompts::SeedTask::entity_extended: {
        const auto meta = strip_terminal(task.context);
        for (auto cell : distinct_cells(task.count, kExtendedObjects.size() * kExtendedForms.size(), rng)) {
            items.push_back(prompts::render(kExtendedForms[cell % kExtendedForms.size()],
                                            {{"m", meta}, {"o", kExtendedObjects[cell / kExtendedForms.size()]}}));
        }
        break;
    }
    case prompts::SeedTask::writing_instruction:
        return fmt::format("Write a {} {} piece about {}, aimed at {}.", pick(kTones, rng),
                           ascii_lower(subject), pick(kWritingSubjects, rng), pick(kPeople, rng));
    case prompts::SeedTask::refine_instruction:
        return fmt::format("{}. Keep it around {} words, use a {} tone, and include at least one {} {}.",
                           strip_terminal(subject), 100 + 50 * rng.below(8), pick(kTones, rng), pick(kAdjectives, rng),
                           pick(kNouns, rng));
    case prompts::SeedTask::material_instructions: {
        const auto words = topic_words(subject);
        const auto w = word_or(words, rng, "the topic");
        for (auto cell : distinct_cells(task.count, kMaterialForms.size() * kMaterialFocus.size(), rng)) {
            const auto focus = prompts::render(kMaterialFocus[cell % kMaterialFocus.size()], {{"w", w}});
            items.push_back(prompts::render(kMaterialForms[cell / kMaterialFocus.size()],
                                            {{"k", std::to_string(2 + rng.below(4))}, {"f", focus}}));
        }
        break;
    }
    }
    std::string out;
    for (const auto& item : items) {
        out.append(item).push_back('\n');
    }
    if (!out.empty()) {
        out.pop_back();
    }
    return out;
}

int quality_score(std::string_view answer, std::uint64_t seed)
{
    const auto words = content_words(answer).size();
    const auto jitter = static_cast<int>(hash64(fmt::format("{}\x1f{}", seed, answer)) % 3) - 1;
    return std::clamp(4 + static_cast<int>(std::min<std::size_t>(4, words / 25)) + jitter, 1, 10);
}

std::string between(std::string_view text, std::string_view open, std::string_view close)
{
    const auto start = text.find(open);
    if (start == std::string_view::npos) {
        return {};
    }
    const auto from = start + open.size();
    const auto end = text.find(close, from);
    return std::string(trim(text.substr(from, end == std::string_view::npos ? std::string_view::npos : end - from)));
}

std::string user_turn(const ChatRequest& request, const MockOptions& options, Rng& rng)
{
    const auto& system = request.messages.front().content;
    std::size_t rounds = 0;
    for (const auto& message : request.messages) {
        rounds += message.role == MessageRole::assistant ? 1 : 0;
    }
    const auto marker = prompts::termination_marker_of(system).value_or("<END_OF_DIALOGUE>");
    // The stop draw comes first so it does not depend on the later draws.
    const bool stop = rng.bernoulli(options.stop_rate);
    if (rounds >= 2 && stop) {
        return marker;
    }
    if (rng.bernoulli(options.closing_thanks_rate)) {
        return std::string(pick(kClosingThanks, rng));
    }
    const auto words = topic_words(request.messages.back().content);
    const auto w = word_or(words, rng, "this");
    const auto w2 = word_or(words, rng, "the rest");
    const bool revising = system.find("\nObjective: ") != std::string::npos && rng.bernoulli(0.5);
    auto text = prompts::render(revising ? pick(kRevisionRequests, rng) : pick(kFollowUps, rng),
                                {{"w", w}, {"w2", w2}, {"a", pick(kTones, rng)}});
    if (rng.bernoulli(options.role_exchange_rate)) {
        return fmt::format("As an AI language model, I can help you explore {} further.", w);
    }
    if (rng.bernoulli(options.politeness_rate)) {
        text = std::string(pick(kPoliteLeads, rng)) + text;
    }
    return text;
}

std::string assistant_turn(const ChatRequest& request, Rng& rng)
{
    const auto& last = request.messages.back().content;
    auto words = topic_words(last);
    if (words.size() > 6) {
        words.resize(6);
    }
    std::string out;
    const auto head = ascii_lower(trim(last).substr(0, 6));
    if (head.rfind("thank", 0) == 0) {
        out = "You're welcome! ";
    }
    const auto count = 3 + rng.below(4);
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) {
            out.push_back(' ');
        }
        out.append(sentence(rng, words));
    }
    return out;
}

} // namespace

MockBackend::MockBackend(MockOptions options) : options_(options) {}

void MockBackend::script(std::string needle, std::vector<std::string> replies)
{
    std::lock_guard lock(mutex_);
    scripts_.push_back({std::move(needle), {replies.begin(), replies.end()}});
}

void MockBackend::add_rule(Rule rule)
{
    std::lock_guard lock(mutex_);
    rules_.push_back(std::move(rule));
}

std::string MockBackend::fingerprint() const
{
    return fmt::format("mock/v1 seed={}", options_.seed);
}

std::optional<std::string> MockBackend::scripted(const ChatRequest& request)
{
    std::lock_guard lock(mutex_);
    const auto& last = request.messages.back().content;
    for (auto& script : scripts_) {
        if (script.replies.empty() || last.find(script.needle) == std::string::npos) {
            continue;
        }
        auto reply = script.replies.front();
        if (script.replies.size() > 1) {
            script.replies.pop_front();
        }
        return reply;
    }
    for (const auto& rule : rules_) {
        if (auto reply = rule(request)) {
            return reply;
        }
    }
    return std::nullopt;
}

std::string MockBackend::do_complete(const ChatRequest& request)
{
    if (auto reply = scripted(request)) {
        return *reply;
    }
    Rng rng(hash64(fmt::format("{}\x1f{}", options_.seed, canonical_json(request).dump())));
    const auto& last = request.messages.back().content;
    std::string transcript;
    for (const auto& message : request.messages) {
        transcript.append(message.content).push_back('\n');
    }

    if (auto task = prompts::identify_seed_task(last)) {
        return seed_list(*task, rng);
    }
    if (transcript.find("[The Start of Assistant 1's Answer]") != std::string::npos) {
        const auto a = quality_score(between(transcript, "[The Start of Assistant 1's Answer]", "[The End of Assistant 1's Answer]"), options_.seed);
        const auto b = quality_score(between(transcript, "[The Start of Assistant 2's Answer]", "[The End of Assistant 2's Answer]"), options_.seed);
        return fmt::format("{} {}\nAssistant 1 gave a {} answer and Assistant 2 gave a {} one.", a, b,
                           pick(kAdjectives, rng), pick(kAdjectives, rng));
    }
    if (transcript.find("[The Start of the AI Assistant's Answer]") != std::string::npos) {
        const auto s = quality_score(between(transcript, "[The Start of the AI Assistant's Answer]", "[The End of the AI Assistant's Answer]"), options_.seed);
        return fmt::format("Score: {}\nThe answer is {} overall.", s, pick(kAdjectives, rng));
    }
    if (transcript.find("[The Start of the Conversation]") != std::string::npos) {
        return fmt::format("Score: {}\nThe conversation flows in a {} way.", 6 + rng.below(4), pick(kAdjectives, rng));
    }
    if (last.find("Is the proposed answer to the question true or false?") != std::string::npos) {
        return rng.bernoulli(0.5) ? "True" : "False";
    }
    if (request.messages.front().role == MessageRole::system &&
        request.messages.front().content.rfind(prompts::kUserSimulatorLead, 0) == 0) {
        return user_turn(request, options_, rng);
    }
    return assistant_turn(request, rng);
}

std::vector<Embedding> MockBackend::do_embed(const std::vector<std::string>& texts)
{
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        Rng rng(hash64(fmt::format("{}\x1f" "embed\x1f{}", options_.seed, text)));
        Embedding vector(options_.embedding_dimension);
        for (std::size_t i = 0; i < vector.size(); i += 2) {
            // Box-Muller; 1 - u keeps the logarithm finite.
            const double radius = std::sqrt(-2.0 * std::log(1.0 - rng.uniform()));
            const double angle = 2.0 * std::numbers::pi * rng.uniform();
            vector[i] = radius * std::cos(angle);
            if (i + 1 < vector.size()) {
                vector[i + 1] = radius * std::sin(angle);
            }
        }
        double norm = 0.0;
        for (double v : vector) {
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (double& v : vector) {
            v /= norm;
        }
        out.push_back(std::move(vector));
    }
    return out;
}

} // namespace ultrachat
