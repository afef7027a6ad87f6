// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"
#include "ultrachat/gateway/chat_backend.hpp"
#include "ultrachat/seeds/generation.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ultrachat::seeds {

/// Node of the world-question tree: 0 meta-topic, 1 subtopic, 2 question, 3 expanded question.
struct TopicNode {
    std::string name;
    std::optional<std::string> parent;
    int depth = 0;

    bool operator==(const TopicNode&) const = default;
};

/// The thirty shipped meta-topics, in their fixed order.
const std::vector<std::string>& standard_meta_topics();

/// Throws PreconditionError if `name` is not a shipped meta-topic.
TopicNode meta_topic(const std::string& name);

/// n distinct subtopics; 30 <= n <= 50.
std::vector<TopicNode> expand_topic(const TopicNode& topic, std::size_t n, ChatBackend& backend,
                                    const GenerationOptions& options = {});

/// n distinct question-like children of a subtopic.
std::vector<TopicNode> generate_questions(const TopicNode& subtopic, std::size_t n, ChatBackend& backend,
                                          const GenerationOptions& options = {});

/// n distinct follow-up questions, none equal to the parent after normalization.
std::vector<TopicNode> expand_question(const TopicNode& question, std::size_t n, ChatBackend& backend,
                                       const GenerationOptions& options = {});

struct TopicFanout {
    std::size_t subtopics = 40;
    std::size_t questions_per_subtopic = 10;
    std::size_t expansions_per_question = 10;
};

/// Full fan-out of one meta-topic into sector-1 openings (questions and
/// expansions), before any dedup. Output order follows the tree.
std::vector<OpeningLine> world_openings(const TopicNode& meta, const TopicFanout& fanout, ChatBackend& backend,
                                        const GenerationOptions& options = {});

} // namespace ultrachat::seeds
