// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/seeds/topics.hpp"

#include "ultrachat/core/embedded_data.hpp"
#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/parallel.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace ultrachat::seeds {

namespace {

std::vector<TopicNode> children(const TopicNode& parent, std::vector<std::string> names)
{
    std::vector<TopicNode> out;
    out.reserve(names.size());
    for (auto& name : names) {
        out.push_back({std::move(name), parent.name, parent.depth + 1});
    }
    return out;
}

void require_depth(const TopicNode& node, int depth, std::string_view operation)
{
    if (node.depth != depth) {
        throw PreconditionError(fmt::format("{} needs a depth-{} node, got depth {}", operation, depth, node.depth));
    }
    if (trim(node.name).empty()) {
        throw PreconditionError(fmt::format("{} needs a named node", operation));
    }
}

} // namespace

const std::vector<std::string>& standard_meta_topics()
{
    static const std::vector<std::string> topics = [] {
        std::vector<std::string> out;
        const auto text = embedded_file("meta_topics.txt").value();
        std::size_t start = 0;
        while (start < text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            const auto line = trim(text.substr(start, end - start));
            if (!line.empty() && line.front() != '#') {
                out.emplace_back(line);
            }
            start = end + 1;
        }
        return out;
    }();
    return topics;
}

TopicNode meta_topic(const std::string& name)
{
    const auto& topics = standard_meta_topics();
    if (std::find(topics.begin(), topics.end(), name) == topics.end()) {
        throw PreconditionError(fmt::format("'{}' is not one of the {} meta-topics", name, topics.size()));
    }
    return {name, std::nullopt, 0};
}

std::vector<TopicNode> expand_topic(const TopicNode& topic, std::size_t n, ChatBackend& backend,
                                    const GenerationOptions& options)
{
    require_depth(topic, 0, "expand_topic");
    if (n < 30 || n > 50) {
        throw PreconditionError(fmt::format("expand_topic needs 30 to 50 subtopics, got {}", n));
    }
    auto names = collect_distinct(
        backend, n, [&](std::size_t missing, std::size_t attempt) { return prompts::subtopics(topic.name, missing, attempt); },
        {}, options, fmt::format("subtopics of '{}'", topic.name));
    return children(topic, std::move(names));
}

std::vector<TopicNode> generate_questions(const TopicNode& subtopic, std::size_t n, ChatBackend& backend,
                                          const GenerationOptions& options)
{
    require_depth(subtopic, 1, "generate_questions");
    if (n < 1) {
        throw PreconditionError("generate_questions needs n >= 1");
    }
    auto names = collect_distinct(
        backend, n,
        [&](std::size_t missing, std::size_t attempt) { return prompts::questions(subtopic.name, missing, attempt); },
        [](const std::string& item) { return is_question_like(item); }, options,
        fmt::format("questions on '{}'", subtopic.name));
    return children(subtopic, std::move(names));
}

std::vector<TopicNode> expand_question(const TopicNode& question, std::size_t n, ChatBackend& backend,
                                       const GenerationOptions& options)
{
    require_depth(question, 2, "expand_question");
    if (n < 1) {
        throw PreconditionError("expand_question needs n >= 1");
    }
    auto names = collect_distinct(
        backend, n,
        [&](std::size_t missing, std::size_t attempt) {
            return prompts::expanded_questions(question.name, missing, attempt);
        },
        [](const std::string& item) { return is_question_like(item); }, options,
        fmt::format("expansions of '{}'", question.name), {question.name});
    return children(question, std::move(names));
}

std::vector<OpeningLine> world_openings(const TopicNode& meta, const TopicFanout& fanout, ChatBackend& backend,
                                        const GenerationOptions& options)
{
    const auto subtopics = expand_topic(meta, fanout.subtopics, backend, options);
    const auto questions = parallel_map<std::vector<TopicNode>>(subtopics.size(), options.concurrency, [&](std::size_t i) {
        return generate_questions(subtopics[i], fanout.questions_per_subtopic, backend, options);
    });

    struct Parent {
        const TopicNode* subtopic;
        const TopicNode* question;
    };
    std::vector<Parent> flat;
    for (std::size_t i = 0; i < subtopics.size(); ++i) {
        for (const auto& question : questions[i]) {
            flat.push_back({&subtopics[i], &question});
        }
    }
    const auto expansions = parallel_map<std::vector<TopicNode>>(flat.size(), options.concurrency, [&](std::size_t i) {
        return expand_question(*flat[i].question, fanout.expansions_per_question, backend, options);
    });

    const std::string version(prompts::kCatalogVersion);
    std::vector<OpeningLine> out;
    out.reserve(flat.size() * (1 + fanout.expansions_per_question));
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const auto& [subtopic, question] = flat[i];
        out.push_back(make_opening(Sector::world_questions, question->name,
                                   {{"topic", meta.name}, {"subtopic", subtopic->name}, {"question", version}}));
        for (const auto& expansion : expansions[i]) {
            out.push_back(make_opening(Sector::world_questions, expansion.name,
                                       {{"topic", meta.name},
                                        {"subtopic", subtopic->name},
                                        {"question", question->name},
                                        {"expansion", version}}));
        }
    }
    return out;
}

} // namespace ultrachat::seeds
